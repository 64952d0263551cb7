"""Syntax tree produced by the MiniOO parser.

Only what the metric extraction needs is kept: declarations with their
signatures, and method bodies down to calls, field accesses and the
control-flow constructs that add decision points.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class TypeRef:
    name: str  # as written, without generic arguments
    dims: int = 0
    line: int = 0

    def text(self) -> str:
        return self.name + "[]" * self.dims


# -- expressions ------------------------------------------------------------


@dataclass
class Expr:
    line: int = field(default=0, kw_only=True)
    column: int = field(default=0, kw_only=True)


@dataclass
class Literal(Expr):
    kind: str  # int, float, string, char, boolean, null


@dataclass
class Name(Expr):
    ident: str


@dataclass
class This(Expr):
    pass


@dataclass
class Super(Expr):
    pass


@dataclass
class FieldAccess(Expr):
    target: Expr
    name: str


@dataclass
class Call(Expr):
    target: Expr | None
    name: str
    args: list[Expr]


@dataclass
class CtorCall(Expr):
    kind: str  # "this" or "super"
    args: list[Expr]


@dataclass
class New(Expr):
    type: TypeRef
    args: list[Expr]


@dataclass
class NewArray(Expr):
    type: TypeRef  # element type
    dims: list[Expr]
    extra_dims: int = 0
    init: ArrayInit | None = None


@dataclass
class ArrayInit(Expr):
    elements: list[Expr]


@dataclass
class Index(Expr):
    array: Expr
    index: Expr


@dataclass
class Unary(Expr):
    op: str
    operand: Expr


@dataclass
class Binary(Expr):
    op: str
    left: Expr
    right: Expr


@dataclass
class Ternary(Expr):
    cond: Expr
    then: Expr
    other: Expr


@dataclass
class Assign(Expr):
    op: str
    target: Expr
    value: Expr


@dataclass
class Cast(Expr):
    type: TypeRef
    operand: Expr


@dataclass
class InstanceOf(Expr):
    operand: Expr
    type: TypeRef


@dataclass
class ClassLiteral(Expr):
    type: TypeRef


# -- statements -------------------------------------------------------------


@dataclass
class Stmt:
    line: int = field(default=0, kw_only=True)


@dataclass
class Block(Stmt):
    body: list[Stmt]


@dataclass
class LocalVar(Stmt):
    type: TypeRef
    declarators: list[tuple[str, int, Expr | None]]  # name, extra dims, initializer


@dataclass
class ExprStmt(Stmt):
    expr: Expr


@dataclass
class If(Stmt):
    cond: Expr
    then: Stmt
    other: Stmt | None


@dataclass
class While(Stmt):
    cond: Expr
    body: Stmt


@dataclass
class DoWhile(Stmt):
    body: Stmt
    cond: Expr


@dataclass
class For(Stmt):
    init: list[Stmt]
    cond: Expr | None
    update: list[Expr]
    body: Stmt


@dataclass
class ForEach(Stmt):
    type: TypeRef
    name: str
    iterable: Expr
    body: Stmt


@dataclass
class SwitchCase:
    labels: list[Expr]  # empty for default
    body: list[Stmt]


@dataclass
class Switch(Stmt):
    subject: Expr
    cases: list[SwitchCase]


@dataclass
class Return(Stmt):
    value: Expr | None


@dataclass
class Jump(Stmt):
    kind: str  # break / continue


@dataclass
class Throw(Stmt):
    value: Expr


@dataclass
class Catch:
    types: list[TypeRef]
    name: str
    body: Block


@dataclass
class Try(Stmt):
    resources: list[LocalVar]
    body: Block
    catches: list[Catch]
    final: Block | None


@dataclass
class Synchronized(Stmt):
    lock: Expr
    body: Block


@dataclass
class Labeled(Stmt):
    label: str
    body: Stmt


@dataclass
class Assert(Stmt):
    cond: Expr
    message: Expr | None


@dataclass
class Empty(Stmt):
    pass


# -- declarations ------------------------------------------------------------


@dataclass
class FieldDecl:
    name: str
    type: TypeRef
    modifiers: set[str]
    init: Expr | None
    line: int


@dataclass
class Param:
    name: str
    type: TypeRef


@dataclass
class MethodDecl:
    name: str
    params: list[Param]
    return_type: TypeRef | None  # None for constructors
    modifiers: set[str]
    body: Block | None
    line: int
    is_constructor: bool = False


@dataclass
class ClassDecl:
    name: str
    qualified: str
    kind: str  # class / interface
    modifiers: set[str]
    extends: list[TypeRef]
    implements: list[TypeRef]
    fields: list[FieldDecl]
    methods: list[MethodDecl]
    start_line: int
    end_line: int
    outer: str | None = None


@dataclass
class Import:
    name: str
    wildcard: bool = False


@dataclass
class CompilationUnit:
    path: str
    package: str
    imports: list[Import]
    classes: list[ClassDecl]
    comment_lines: set[int]
    total_lines: int
