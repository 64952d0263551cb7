"""Recursive-descent parser for the MiniOO language subset."""

from __future__ import annotations

from . import ast as A
from .lexer import PRIMITIVES, LexResult, Token

MODIFIERS = frozenset(
    "public protected private static final abstract native synchronized transient "
    "volatile strictfp default".split()
)

ASSIGN_OPS = frozenset("= += -= *= /= %= &= |= ^= <<= >>= >>>=".split())

# binary operators by precedence, loosest first
BINARY_LEVELS = (
    ("||",),
    ("&&",),
    ("|",),
    ("^",),
    ("&",),
    ("==", "!="),
    ("<", ">", "<=", ">=", "instanceof"),
    ("<<", ">>", ">>>"),
    ("+", "-"),
    ("*", "/", "%"),
)

_CAST_FOLLOWERS = frozenset(("ident", "number", "string", "char"))


class ParseError(Exception):
    def __init__(self, token: Token, message: str):
        self.line = token.line
        self.column = token.column
        super().__init__(message)


class Parser:
    def __init__(self, path: str, lexed: LexResult):
        self.path = path
        self.toks = lexed.tokens
        self.pos = 0
        self.unit = A.CompilationUnit(
            path, "", [], [], lexed.comment_lines, lexed.total_lines
        )

    # -- token helpers ---------------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.toks[self.pos]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.pos + k, len(self.toks) - 1)]

    def next(self) -> Token:
        t = self.toks[self.pos]
        if t.kind != "eof":
            self.pos += 1
        return t

    def error(self, message: str, tok: Token | None = None) -> ParseError:
        return ParseError(tok or self.tok, message)

    def expect_op(self, op: str) -> Token:
        if not self.tok.is_op(op):
            raise self.error(f"expected '{op}' but found {self._desc(self.tok)}")
        return self.next()

    def expect_kw(self, kw: str) -> Token:
        if not self.tok.is_kw(kw):
            raise self.error(f"expected '{kw}' but found {self._desc(self.tok)}")
        return self.next()

    def expect_ident(self) -> Token:
        if self.tok.kind != "ident":
            raise self.error(f"expected identifier but found {self._desc(self.tok)}")
        return self.next()

    def accept_op(self, op: str) -> bool:
        if self.tok.is_op(op):
            self.pos += 1
            return True
        return False

    @staticmethod
    def _desc(t: Token) -> str:
        return "end of file" if t.kind == "eof" else f"'{t.text}'"

    # -- compilation unit ------------------------------------------------------

    def parse_unit(self) -> A.CompilationUnit:
        """Parse the whole unit; classes completed before an error are kept."""
        self.skip_annotations()
        if self.tok.is_kw("package"):
            self.next()
            self.unit.package = self.qualified_name()
            self.expect_op(";")
        while self.tok.is_kw("import"):
            self.next()
            if self.tok.is_kw("static"):
                self.next()
            name = self.qualified_name()
            wildcard = False
            if self.accept_op("."):
                self.expect_op("*")
                wildcard = True
            self.expect_op(";")
            self.unit.imports.append(A.Import(name, wildcard))
        while self.tok.kind != "eof":
            if self.accept_op(";"):
                continue
            mods = self.modifiers()
            self.class_decl(mods, outer=None)
        return self.unit

    def qualified_name(self) -> str:
        parts = [self.expect_ident().text]
        while self.tok.is_op(".") and self.peek().kind == "ident":
            self.next()
            parts.append(self.next().text)
        return ".".join(parts)

    def skip_annotations(self) -> None:
        while self.tok.is_op("@") and not self.peek().is_kw("interface"):
            self.next()
            self.qualified_name()
            if self.tok.is_op("("):
                self.skip_balanced("(", ")")

    def skip_balanced(self, open_: str, close: str) -> None:
        depth = 0
        while True:
            t = self.next()
            if t.kind == "eof":
                raise self.error(f"unbalanced '{open_}'", t)
            if t.is_op(open_):
                depth += 1
            elif t.is_op(close):
                depth -= 1
                if depth == 0:
                    return

    def modifiers(self) -> set[str]:
        mods: set[str] = set()
        while True:
            self.skip_annotations()
            t = self.tok
            if t.kind == "keyword" and t.text in MODIFIERS:
                # "default" only acts as a modifier before a member declaration
                if t.text == "default" and self.peek().is_op(":"):
                    break
                mods.add(t.text)
                self.next()
            else:
                break
        return mods

    # -- declarations ----------------------------------------------------------

    def class_decl(self, mods: set[str], outer: A.ClassDecl | None) -> A.ClassDecl:
        start = self.tok
        if self.tok.is_kw("enum") or (self.tok.is_op("@") and self.peek().is_kw("interface")):
            raise self.error("enums and annotation types are not supported")
        if self.tok.is_kw("class"):
            kind = "class"
        elif self.tok.is_kw("interface"):
            kind = "interface"
        else:
            raise self.error(f"expected class or interface declaration, found {self._desc(self.tok)}")
        self.next()
        name = self.expect_ident().text
        if self.tok.is_op("<"):
            raise self.error("generic type parameters are not supported")
        if outer is not None:
            qualified = f"{outer.qualified}.{name}"
        else:
            qualified = f"{self.unit.package}.{name}" if self.unit.package else name
        extends: list[A.TypeRef] = []
        implements: list[A.TypeRef] = []
        if self.tok.is_kw("extends"):
            self.next()
            extends.append(self.type_ref())
            while kind == "interface" and self.accept_op(","):
                extends.append(self.type_ref())
        if self.tok.is_kw("implements"):
            self.next()
            implements.append(self.type_ref())
            while self.accept_op(","):
                implements.append(self.type_ref())
        decl = A.ClassDecl(
            name, qualified, kind, mods, extends, implements, [], [], start.line, 0,
            outer.qualified if outer else None,
        )
        self.expect_op("{")
        nested: list[A.ClassDecl] = []
        while not self.tok.is_op("}"):
            if self.tok.kind == "eof":
                raise self.error(f"unterminated class body of {name}")
            self.member(decl, nested)
        decl.end_line = self.next().line
        self.unit.classes.append(decl)
        return decl

    def member(self, decl: A.ClassDecl, nested: list[A.ClassDecl]) -> None:
        if self.accept_op(";"):
            return
        if self.tok.is_op("{") or (self.tok.is_kw("static") and self.peek().is_op("{")):
            # initializer block: parsed for syntax, not attributed to any method
            if self.tok.is_kw("static"):
                self.next()
            self.block()
            return
        mods = self.modifiers()
        if self.tok.is_kw("class", "interface", "enum"):
            nested.append(self.class_decl(mods, decl))
            return
        line = self.tok.line
        if self.tok.is_op("<"):
            raise self.error("generic methods are not supported")
        if (
            self.tok.kind == "ident"
            and self.tok.text == decl.name
            and self.peek().is_op("(")
        ):
            self.next()
            params = self.params()
            self.throws_clause()
            body = self.block()
            decl.methods.append(
                A.MethodDecl(decl.name, params, None, mods, body, line, is_constructor=True)
            )
            return
        type_ = self.type_ref(allow_void=True)
        name_tok = self.expect_ident()
        if self.tok.is_op("("):
            params = self.params()
            extra = self.dims()
            if extra:
                type_ = A.TypeRef(type_.name, type_.dims + extra, type_.line)
            self.throws_clause()
            body = None
            if self.tok.is_op("{"):
                body = self.block()
            else:
                self.expect_op(";")
            decl.methods.append(A.MethodDecl(name_tok.text, params, type_, mods, body, line))
            return
        if type_.name == "void":
            raise self.error("field cannot have type void", name_tok)
        while True:
            extra = self.dims()
            ftype = A.TypeRef(type_.name, type_.dims + extra, type_.line)
            init = None
            if self.accept_op("="):
                init = self.var_init()
            decl.fields.append(A.FieldDecl(name_tok.text, ftype, mods, init, name_tok.line))
            if not self.accept_op(","):
                break
            name_tok = self.expect_ident()
        self.expect_op(";")

    def throws_clause(self) -> None:
        if self.tok.is_kw("throws"):
            self.next()
            self.type_ref()
            while self.accept_op(","):
                self.type_ref()

    def params(self) -> list[A.Param]:
        self.expect_op("(")
        out: list[A.Param] = []
        if not self.tok.is_op(")"):
            while True:
                self.modifiers()
                t = self.type_ref()
                if self.accept_op("..."):
                    t = A.TypeRef(t.name, t.dims + 1, t.line)
                name = self.expect_ident().text
                extra = self.dims()
                out.append(A.Param(name, A.TypeRef(t.name, t.dims + extra, t.line)))
                if not self.accept_op(","):
                    break
        self.expect_op(")")
        return out

    def dims(self) -> int:
        n = 0
        while self.tok.is_op("[") and self.peek().is_op("]"):
            self.next()
            self.next()
            n += 1
        return n

    def type_ref(self, allow_void: bool = False) -> A.TypeRef:
        t = self.tok
        if t.kind == "keyword" and t.text in PRIMITIVES:
            if t.text == "void" and not allow_void:
                raise self.error("unexpected 'void'")
            self.next()
            return A.TypeRef(t.text, self.dims(), t.line)
        name = self.qualified_name()
        if self.tok.is_op("<"):
            self.skip_type_args()
            # a qualified type may continue after its arguments
            while self.tok.is_op(".") and self.peek().kind == "ident":
                self.next()
                name += "." + self.next().text
                if self.tok.is_op("<"):
                    self.skip_type_args()
        return A.TypeRef(name, self.dims(), t.line)

    def skip_type_args(self) -> None:
        """Skip ``<...>`` generic arguments; raises if the tokens cannot be one."""
        depth = 0
        while True:
            t = self.tok
            if t.is_op("<"):
                depth += 1
            elif t.is_op(">"):
                depth -= 1
            elif t.is_op(">>"):
                depth -= 2
            elif t.is_op(">>>"):
                depth -= 3
            elif not (
                t.kind == "ident"
                or t.is_op(".", ",", "?", "[", "]", "&")
                or t.is_kw("extends", "super")
                or (t.kind == "keyword" and t.text in PRIMITIVES)
            ):
                raise self.error("malformed type arguments")
            self.next()
            if depth < 0:
                raise self.error("malformed type arguments")
            if depth == 0:
                return

    def try_type_then_ident(self) -> A.TypeRef | None:
        """Speculatively parse ``Type ident``; restore position on failure."""
        save = self.pos
        try:
            t = self.type_ref()
        except ParseError:
            self.pos = save
            return None
        if self.tok.kind == "ident":
            follow = self.peek()
            if follow.is_op("=", ";", ",", ":", "[", ")"):
                return t
        self.pos = save
        return None

    # -- statements ------------------------------------------------------------

    def block(self) -> A.Block:
        start = self.expect_op("{")
        body: list[A.Stmt] = []
        while not self.tok.is_op("}"):
            if self.tok.kind == "eof":
                raise self.error("unterminated block", start)
            body.append(self.statement())
        self.next()
        return A.Block(body, line=start.line)

    def local_var(self, type_: A.TypeRef, line: int) -> A.LocalVar:
        decls = []
        while True:
            name = self.expect_ident().text
            extra = self.dims()
            init = None
            if self.accept_op("="):
                init = self.var_init()
            decls.append((name, extra, init))
            if not self.accept_op(","):
                break
        return A.LocalVar(type_, decls, line=line)

    def var_init(self) -> A.Expr:
        if self.tok.is_op("{"):
            return self.array_init()
        return self.expression()

    def array_init(self) -> A.ArrayInit:
        start = self.expect_op("{")
        elems: list[A.Expr] = []
        while not self.tok.is_op("}"):
            elems.append(self.var_init())
            if not self.accept_op(","):
                break
        self.expect_op("}")
        return A.ArrayInit(elems, line=start.line, column=start.column)

    def statement(self) -> A.Stmt:
        t = self.tok
        line = t.line
        if t.is_op("{"):
            return self.block()
        if t.is_op(";"):
            self.next()
            return A.Empty(line=line)
        if t.kind == "keyword":
            kw = t.text
            if kw == "if":
                self.next()
                cond = self.paren_expr()
                then = self.statement()
                other = None
                if self.tok.is_kw("else"):
                    self.next()
                    other = self.statement()
                return A.If(cond, then, other, line=line)
            if kw == "while":
                self.next()
                cond = self.paren_expr()
                return A.While(cond, self.statement(), line=line)
            if kw == "do":
                self.next()
                body = self.statement()
                self.expect_kw("while")
                cond = self.paren_expr()
                self.expect_op(";")
                return A.DoWhile(body, cond, line=line)
            if kw == "for":
                return self.for_statement()
            if kw == "switch":
                return self.switch_statement()
            if kw == "return":
                self.next()
                value = None if self.tok.is_op(";") else self.expression()
                self.expect_op(";")
                return A.Return(value, line=line)
            if kw in ("break", "continue"):
                self.next()
                if self.tok.kind == "ident":
                    self.next()
                self.expect_op(";")
                return A.Jump(kw, line=line)
            if kw == "throw":
                self.next()
                value = self.expression()
                self.expect_op(";")
                return A.Throw(value, line=line)
            if kw == "try":
                return self.try_statement()
            if kw == "synchronized" and self.peek().is_op("("):
                self.next()
                lock = self.paren_expr()
                return A.Synchronized(lock, self.block(), line=line)
            if kw == "assert":
                self.next()
                cond = self.expression()
                msg = self.expression() if self.accept_op(":") else None
                self.expect_op(";")
                return A.Assert(cond, msg, line=line)
            if kw in ("class", "interface", "enum"):
                raise self.error("local classes are not supported")
            if kw == "final" or (kw == "else"):
                if kw == "else":
                    raise self.error("'else' without 'if'")
                self.next()
                self.skip_annotations()
                type_ = self.type_ref()
                lv = self.local_var(type_, line)
                self.expect_op(";")
                return lv
        if t.is_op("@"):
            self.skip_annotations()
            return self.statement()
        if t.kind == "ident" and self.peek().is_op(":"):
            self.next()
            self.next()
            return A.Labeled(t.text, self.statement(), line=line)
        if t.kind == "ident" or (t.kind == "keyword" and t.text in PRIMITIVES):
            type_ = self.try_type_then_ident()
            if type_ is not None:
                lv = self.local_var(type_, line)
                self.expect_op(";")
                return lv
        expr = self.expression()
        self.expect_op(";")
        return A.ExprStmt(expr, line=line)

    def paren_expr(self) -> A.Expr:
        self.expect_op("(")
        e = self.expression()
        self.expect_op(")")
        return e

    def for_statement(self) -> A.Stmt:
        line = self.next().line
        self.expect_op("(")
        save = self.pos
        self.modifiers()
        type_ = self.try_type_then_ident()
        if type_ is not None and self.peek().is_op(":"):
            name = self.expect_ident().text
            self.expect_op(":")
            iterable = self.expression()
            self.expect_op(")")
            return A.ForEach(type_, name, iterable, self.statement(), line=line)
        init: list[A.Stmt] = []
        if type_ is not None:
            init.append(self.local_var(type_, line))
        else:
            self.pos = save
            while not self.tok.is_op(";"):
                e = self.expression()
                init.append(A.ExprStmt(e, line=e.line))
                if not self.accept_op(","):
                    break
        self.expect_op(";")
        cond = None if self.tok.is_op(";") else self.expression()
        self.expect_op(";")
        update: list[A.Expr] = []
        while not self.tok.is_op(")"):
            update.append(self.expression())
            if not self.accept_op(","):
                break
        self.expect_op(")")
        return A.For(init, cond, update, self.statement(), line=line)

    def switch_statement(self) -> A.Switch:
        line = self.next().line
        subject = self.paren_expr()
        self.expect_op("{")
        cases: list[A.SwitchCase] = []
        while not self.tok.is_op("}"):
            if self.tok.is_kw("case"):
                self.next()
                label = self.expression()
                self.expect_op(":")
                if cases and not cases[-1].body:
                    cases[-1].labels.append(label)
                else:
                    cases.append(A.SwitchCase([label], []))
            elif self.tok.is_kw("default"):
                self.next()
                self.expect_op(":")
                cases.append(A.SwitchCase([], []))
            elif not cases:
                raise self.error("statement before first case label")
            else:
                cases[-1].body.append(self.statement())
        self.next()
        return A.Switch(subject, cases, line=line)

    def try_statement(self) -> A.Try:
        line = self.next().line
        resources: list[A.LocalVar] = []
        if self.accept_op("("):
            while not self.tok.is_op(")"):
                self.modifiers()
                type_ = self.type_ref()
                name = self.expect_ident().text
                self.expect_op("=")
                resources.append(A.LocalVar(type_, [(name, 0, self.expression())], line=line))
                if not self.accept_op(";"):
                    break
            self.expect_op(")")
        body = self.block()
        catches: list[A.Catch] = []
        while self.tok.is_kw("catch"):
            self.next()
            self.expect_op("(")
            self.modifiers()
            types = [self.type_ref()]
            while self.accept_op("|"):
                types.append(self.type_ref())
            name = self.expect_ident().text
            self.expect_op(")")
            catches.append(A.Catch(types, name, self.block()))
        final = None
        if self.tok.is_kw("finally"):
            self.next()
            final = self.block()
        if not catches and final is None and not resources:
            raise self.error("try without catch or finally")
        return A.Try(resources, body, catches, final, line=line)

    # -- expressions -----------------------------------------------------------

    def expression(self) -> A.Expr:
        left = self.ternary()
        if self.tok.kind == "op" and self.tok.text in ASSIGN_OPS:
            op = self.next()
            value = self.expression()
            return A.Assign(op.text, left, value, line=op.line, column=op.column)
        if self.tok.is_op("->"):
            raise self.error("lambda expressions are not supported")
        return left

    def ternary(self) -> A.Expr:
        cond = self.binary(0)
        if self.tok.is_op("?"):
            q = self.next()
            then = self.expression()
            self.expect_op(":")
            other = self.ternary()
            return A.Ternary(cond, then, other, line=q.line, column=q.column)
        return cond

    def binary(self, level: int) -> A.Expr:
        if level == len(BINARY_LEVELS):
            return self.unary()
        ops = BINARY_LEVELS[level]
        left = self.binary(level + 1)
        while True:
            t = self.tok
            if t.kind == "op" and t.text in ops:
                self.next()
                right = self.binary(level + 1)
                left = A.Binary(t.text, left, right, line=t.line, column=t.column)
            elif t.is_kw("instanceof") and "instanceof" in ops:
                self.next()
                left = A.InstanceOf(left, self.type_ref(), line=t.line, column=t.column)
            else:
                return left

    def unary(self) -> A.Expr:
        t = self.tok
        if t.is_op("+", "-", "!", "~", "++", "--"):
            self.next()
            return A.Unary(t.text, self.unary(), line=t.line, column=t.column)
        if t.is_op("("):
            cast = self.try_cast()
            if cast is not None:
                return cast
        return self.postfix(self.primary())

    def try_cast(self) -> A.Expr | None:
        save = self.pos
        open_ = self.next()
        nt = self.tok
        primitive = nt.kind == "keyword" and nt.text in PRIMITIVES and nt.text != "void"
        if not (primitive or nt.kind == "ident"):
            self.pos = save
            return None
        try:
            type_ = self.type_ref()
        except ParseError:
            self.pos = save
            return None
        if not self.tok.is_op(")"):
            self.pos = save
            return None
        self.next()
        f = self.tok
        if primitive:
            ok = not f.is_op(")", ";", ",", "]", "}", ".") and f.kind != "eof"
            if f.is_op("+", "-"):
                ok = True
        else:
            ok = (
                f.kind in _CAST_FOLLOWERS
                or f.is_op("(", "!", "~")
                or f.is_kw("this", "super", "new", "true", "false", "null")
            )
        if not ok:
            self.pos = save
            return None
        return A.Cast(type_, self.unary(), line=open_.line, column=open_.column)

    def args(self) -> list[A.Expr]:
        self.expect_op("(")
        out: list[A.Expr] = []
        if not self.tok.is_op(")"):
            while True:
                out.append(self.expression())
                if not self.accept_op(","):
                    break
        self.expect_op(")")
        return out

    def primary(self) -> A.Expr:
        t = self.tok
        pos = dict(line=t.line, column=t.column)
        if t.kind == "number":
            self.next()
            is_float = any(ch in t.text for ch in ".eEfFdD") and not t.text.lower().startswith("0x")
            return A.Literal("double" if is_float else "int", **pos)
        if t.kind == "string":
            self.next()
            return A.Literal("String", **pos)
        if t.kind == "char":
            self.next()
            return A.Literal("char", **pos)
        if t.is_kw("true", "false"):
            self.next()
            return A.Literal("boolean", **pos)
        if t.is_kw("null"):
            self.next()
            return A.Literal("null", **pos)
        if t.is_kw("this"):
            self.next()
            if self.tok.is_op("("):
                return A.CtorCall("this", self.args(), **pos)
            return A.This(**pos)
        if t.is_kw("super"):
            self.next()
            if self.tok.is_op("("):
                return A.CtorCall("super", self.args(), **pos)
            return A.Super(**pos)
        if t.is_kw("new"):
            return self.creator()
        if t.is_op("("):
            self.next()
            e = self.expression()
            self.expect_op(")")
            return e
        if t.kind == "keyword" and t.text in PRIMITIVES:
            type_ = self.type_ref(allow_void=True)
            self.expect_op(".")
            self.expect_kw("class")
            return A.ClassLiteral(type_, **pos)
        if t.kind == "ident":
            self.next()
            if self.tok.is_op("("):
                return A.Call(None, t.text, self.args(), **pos)
            return A.Name(t.text, **pos)
        raise self.error(f"unexpected {self._desc(t)} in expression")

    def creator(self) -> A.Expr:
        t = self.next()
        pos = dict(line=t.line, column=t.column)
        nt = self.tok
        if nt.kind == "keyword" and nt.text in PRIMITIVES:
            self.next()
            type_ = A.TypeRef(nt.text, 0, nt.line)
        else:
            name = self.qualified_name()
            if self.tok.is_op("<"):
                self.skip_type_args()
            type_ = A.TypeRef(name, 0, nt.line)
        if self.tok.is_op("["):
            dims: list[A.Expr] = []
            extra = 0
            while self.tok.is_op("["):
                self.next()
                if self.tok.is_op("]"):
                    self.next()
                    extra += 1
                else:
                    if extra:
                        raise self.error("array dimension after empty dimension")
                    dims.append(self.expression())
                    self.expect_op("]")
            init = self.array_init() if self.tok.is_op("{") else None
            return A.NewArray(type_, dims, extra, init, **pos)
        args = self.args()
        if self.tok.is_op("{"):
            raise self.error("anonymous classes are not supported")
        return A.New(type_, args, **pos)

    def postfix(self, e: A.Expr) -> A.Expr:
        while True:
            t = self.tok
            if t.is_op("."):
                self.next()
                nt = self.tok
                if nt.is_kw("class"):
                    self.next()
                    e = A.ClassLiteral(A.TypeRef(_dotted(e) or "?", 0, nt.line), line=t.line, column=t.column)
                    continue
                if nt.is_kw("this"):
                    self.next()
                    e = A.This(line=nt.line, column=nt.column)
                    continue
                if nt.is_kw("new"):
                    raise self.error("qualified instance creation is not supported")
                name = self.expect_ident()
                if self.tok.is_op("("):
                    e = A.Call(e, name.text, self.args(), line=name.line, column=name.column)
                else:
                    e = A.FieldAccess(e, name.text, line=name.line, column=name.column)
            elif t.is_op("["):
                self.next()
                idx = self.expression()
                self.expect_op("]")
                e = A.Index(e, idx, line=t.line, column=t.column)
            elif t.is_op("++", "--"):
                self.next()
                e = A.Unary("post" + t.text, e, line=t.line, column=t.column)
            elif t.is_op("::"):
                raise self.error("method references are not supported")
            else:
                return e


def _dotted(e: A.Expr) -> str | None:
    if isinstance(e, A.Name):
        return e.ident
    if isinstance(e, A.FieldAccess):
        head = _dotted(e.target)
        return None if head is None else f"{head}.{e.name}"
    return None


dotted_name = _dotted
