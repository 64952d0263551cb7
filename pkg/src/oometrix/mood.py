"""System-level MOOD metrics: MHF, AHF, MIF, AIF, CF and PF.

Every function returns a ratio in [0, 1], or ``None`` when the ratio's
denominator vanishes. ``None`` is deliberately distinct from 0.0.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

from .model import ClassInfo, CodeModel
from .relations import ModelContext


@dataclass(frozen=True)
class MoodResult:
    mhf: float | None
    ahf: float | None
    mif: float | None
    aif: float | None
    cf: float | None
    pf: float | None

    def as_dict(self) -> dict[str, float | None]:
        return asdict(self)


def _ctx(model: CodeModel | ModelContext, mood_constructors: bool = False) -> ModelContext:
    if isinstance(model, ModelContext):
        return model
    return ModelContext(model, mood_constructors=mood_constructors)


def visible_count(ctx: ModelContext, owner: ClassInfo, visibility: str) -> int:
    """Number of other classes that can access a member with this visibility."""
    tc = ctx.model.tc
    if visibility == "public":
        return tc - 1
    if visibility == "protected":
        return len(ctx.hierarchy.descendants[owner.name])
    if visibility == "package":
        peers = sum(1 for c in ctx.model.classes if c.package == owner.package)
        return peers - 1
    return 0


def visibility_fraction(ctx: ModelContext, owner: ClassInfo, visibility: str) -> float:
    return visible_count(ctx, owner, visibility) / (ctx.model.tc - 1)


def _hiding(ctx: ModelContext, members) -> float | None:
    if ctx.model.tc <= 1:
        return None
    total = 0
    hidden = 0.0
    for owner, visibility in members:
        total += 1
        hidden += 1.0 - visibility_fraction(ctx, owner, visibility)
    if total == 0:
        return None
    return hidden / total


def mhf(model: CodeModel | ModelContext, mood_constructors: bool = False) -> float | None:
    ctx = _ctx(model, mood_constructors)
    return _hiding(
        ctx, ((c, m.visibility) for c in ctx.model.classes for m in ctx.declared_methods(c))
    )


def ahf(model: CodeModel | ModelContext) -> float | None:
    ctx = _ctx(model)
    return _hiding(ctx, ((c, a.visibility) for c in ctx.model.classes for a in c.attributes))


def mif(model: CodeModel | ModelContext, mood_constructors: bool = False) -> float | None:
    ctx = _ctx(model, mood_constructors)
    inherited = available = 0
    for c in ctx.model.classes:
        mi = len(ctx.inherited_methods(c))
        inherited += mi
        available += len(ctx.declared_methods(c)) + mi
    return inherited / available if available else None


def aif(model: CodeModel | ModelContext) -> float | None:
    ctx = _ctx(model)
    inherited = available = 0
    for c in ctx.model.classes:
        ai = len(ctx.inherited_attributes(c))
        inherited += ai
        available += len(c.attributes) + ai
    return inherited / available if available else None


def is_client(ctx: ModelContext, a: str, b: str) -> bool:
    """``a`` depends on ``b`` through something other than inheritance."""
    return a != b and b in ctx.dependencies[a] and not ctx.hierarchy.related(a, b)


def cf(model: CodeModel | ModelContext) -> float | None:
    ctx = _ctx(model)
    tc = ctx.model.tc
    if tc < 2:
        return None
    edges = sum(
        1 for a, targets in ctx.dependencies.items() for b in targets if is_client(ctx, a, b)
    )
    return edges / (tc * tc - tc)


def pf(model: CodeModel | ModelContext, mood_constructors: bool = False) -> float | None:
    ctx = _ctx(model, mood_constructors)
    overrides = 0
    potential = 0
    for c in ctx.model.classes:
        mo = len(ctx.overriding_methods(c))
        mn = len(ctx.declared_methods(c)) - mo
        overrides += mo
        potential += mn * len(ctx.hierarchy.descendants[c.name])
    return overrides / potential if potential else None


def mood(model: CodeModel | ModelContext, mood_constructors: bool = False) -> MoodResult:
    ctx = _ctx(model, mood_constructors)
    return MoodResult(
        mhf=mhf(ctx), ahf=ahf(ctx), mif=mif(ctx), aif=aif(ctx), cf=cf(ctx), pf=pf(ctx)
    )
