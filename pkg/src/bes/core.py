"""Monotone boolean equation systems and their concrete semantics.

A system is an ordered list of equations x_i = f_i(x_1, ..., x_n) over the
two-point lattice {0, 1}.  Right-hand sides are built from constants, state
variables, free parameters (of either polarity), conjunction, and
disjunction.  Negation of state variables is excluded by construction, so
every f_i is monotone in the state and the least fixpoint exists and is
reached by iterating from the all-zeros tuple in at most n steps.

Bits are plain ints.  Evaluation works bitwise, so callers may pack many
boolean scenarios into one int (pass the all-ones mask as ``ones``); the
default ``ones=1`` gives ordinary 0/1 semantics.  Everything here is
immutable and side-effect free.
"""

from __future__ import annotations

from dataclasses import dataclass
import re

Valuation = tuple[int, ...]        # one bit per state variable
ParamAssignment = tuple[int, ...]  # one bit per parameter
IndexSet = frozenset[int]          # set of variable indices

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class Const:
    value: int


@dataclass(frozen=True)
class Var:
    """Occurrence of a state variable; never negated."""

    index: int


@dataclass(frozen=True)
class Param:
    """Occurrence of a free parameter, positive or negated."""

    index: int
    negated: bool = False


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


Formula = Const | Var | Param | And | Or


class NonMonotoneError(RuntimeError):
    """Fixpoint iteration failed to converge within the lattice height."""


def formula_depth(f: Formula) -> int:
    """Height of the formula tree; a leaf has depth 1."""
    if isinstance(f, (And, Or)):
        return 1 + max(formula_depth(f.left), formula_depth(f.right))
    return 1


def support(f: Formula) -> IndexSet:
    """The set of state variables occurring syntactically in f."""
    out: set[int] = set()
    stack = [f]
    while stack:
        node = stack.pop()
        if isinstance(node, Var):
            out.add(node.index)
        elif isinstance(node, (And, Or)):
            stack.append(node.left)
            stack.append(node.right)
    return frozenset(out)


def params_of(f: Formula) -> frozenset[int]:
    """The set of parameters occurring syntactically in f."""
    out: set[int] = set()
    stack = [f]
    while stack:
        node = stack.pop()
        if isinstance(node, Param):
            out.add(node.index)
        elif isinstance(node, (And, Or)):
            stack.append(node.left)
            stack.append(node.right)
    return frozenset(out)


@dataclass(frozen=True)
class System:
    """An ordered tuple of monotone equations plus declared names.

    ``formulas[i]`` is the right-hand side defining ``var_names[i]``.
    Validation happens at construction; a System that exists is well formed.
    """

    formulas: tuple[Formula, ...]
    var_names: tuple[str, ...]
    param_names: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        n = len(self.formulas)
        if n < 1:
            raise ValueError("a system needs at least one equation")
        if len(self.var_names) != n:
            raise ValueError("var_names length must match formula count")
        names = self.var_names + self.param_names
        if len(set(names)) != len(names):
            raise ValueError("variable and parameter names must be distinct")
        for name in names:
            if not _IDENT_RE.match(name):
                raise ValueError(f"invalid identifier: {name!r}")
        num_params = len(self.param_names)
        for i, f in enumerate(self.formulas):
            for v in support(f):
                if not 0 <= v < n:
                    raise ValueError(f"equation {i} uses variable index {v} out of range")
            for k in params_of(f):
                if not 0 <= k < num_params:
                    raise ValueError(f"equation {i} uses parameter index {k} out of range")

    @property
    def n(self) -> int:
        return len(self.formulas)

    @property
    def num_params(self) -> int:
        return len(self.param_names)

    def supports(self) -> list[tuple[int, ...]]:
        """Sorted support of each equation, by equation index."""
        return [tuple(sorted(support(f))) for f in self.formulas]


def eval_formula(f: Formula, x: Valuation, p: ParamAssignment, ones: int = 1) -> int:
    """Value of f under state bits x and parameter bits p.

    Bits may be packed bitmasks covering many scenarios at once; ``ones``
    must then be the all-ones mask of that width.
    """
    if isinstance(f, Var):
        return x[f.index]
    if isinstance(f, And):
        return eval_formula(f.left, x, p, ones) & eval_formula(f.right, x, p, ones)
    if isinstance(f, Or):
        return eval_formula(f.left, x, p, ones) | eval_formula(f.right, x, p, ones)
    if isinstance(f, Param):
        bit = p[f.index]
        return (bit ^ ones) if f.negated else bit
    if isinstance(f, Const):
        return ones if f.value else 0
    raise TypeError(f"not a formula node: {f!r}")


def step(system: System, x: Valuation, p: ParamAssignment = (), ones: int = 1) -> Valuation:
    """One parallel application of all equations to x."""
    return tuple(eval_formula(f, x, p, ones) for f in system.formulas)


def tuple_le(x: Valuation, y: Valuation) -> bool:
    """Componentwise order on 0/1 valuations."""
    if len(x) != len(y):
        raise ValueError("valuations of different length are incomparable")
    return all(a <= b for a, b in zip(x, y))


def kleene_lfp(
    system: System, p: ParamAssignment = (), ones: int = 1
) -> tuple[Valuation, int]:
    """Least fixpoint by ascending iteration from the all-zeros tuple.

    Returns (fixpoint, depth) where depth is the least number of
    applications after which the iterate stops changing.  The depth is at
    most n; exceeding that bound means an equation is not monotone and
    raises NonMonotoneError.
    """
    n = system.n
    x = (0,) * n
    for k in range(n + 1):
        nxt = step(system, x, p, ones)
        if nxt == x:
            return x, k
        x = nxt
    raise NonMonotoneError("iteration exceeded the lattice height; system is not monotone")


def masked_kleene(
    system: System,
    masked: IndexSet,
    m: int,
    p: ParamAssignment = (),
    ones: int = 1,
) -> Valuation:
    """m-fold iteration where equations in ``masked`` are pinned to 0.

    Runs the system whose i-th component is the constant 0 when i is in
    ``masked`` and f_i otherwise, starting from all zeros.
    """
    if m < 0:
        raise ValueError("iteration count must be nonnegative")
    n = system.n
    x: Valuation = (0,) * n
    for _ in range(m):
        x = tuple(
            0 if i in masked else eval_formula(system.formulas[i], x, p, ones)
            for i in range(n)
        )
    return x


def dualize_formula(f: Formula) -> Formula:
    """De Morgan dual: swap and/or and 0/1, flip parameter polarity."""
    if isinstance(f, Var):
        return f
    if isinstance(f, And):
        return Or(dualize_formula(f.left), dualize_formula(f.right))
    if isinstance(f, Or):
        return And(dualize_formula(f.left), dualize_formula(f.right))
    if isinstance(f, Param):
        return Param(f.index, not f.negated)
    return Const(1 - f.value)


def dualize(system: System) -> System:
    """The De Morgan dual system.

    The least fixpoint of the dual is the bitwise complement of the
    greatest fixpoint of the original, at every parameter assignment.
    """
    return System(
        tuple(dualize_formula(f) for f in system.formulas),
        system.var_names,
        system.param_names,
    )


def greatest_fixpoint(system: System, p: ParamAssignment = ()) -> tuple[Valuation, int]:
    """Greatest fixpoint via dualization; depth is the dual iteration's depth."""
    value, depth = kleene_lfp(dualize(system), p)
    return tuple(1 - b for b in value), depth


def substitute_var(f: Formula, index: int, replacement: Formula) -> Formula:
    """Replace every occurrence of the given state variable in f."""
    if isinstance(f, Var):
        return replacement if f.index == index else f
    if isinstance(f, And):
        return And(
            substitute_var(f.left, index, replacement),
            substitute_var(f.right, index, replacement),
        )
    if isinstance(f, Or):
        return Or(
            substitute_var(f.left, index, replacement),
            substitute_var(f.right, index, replacement),
        )
    return f


def is_semantically_monotone(system: System, max_n: int = 4) -> bool:
    """Brute-force monotonicity check for debugging; n and P must be small."""
    n, np = system.n, system.num_params
    if n > max_n or np > 6:
        raise ValueError("semantic monotonicity check is exhaustive; instance too large")
    vals = [tuple((j >> i) & 1 for i in range(n)) for j in range(1 << n)]
    passignments = [tuple((j >> k) & 1 for k in range(np)) for j in range(1 << np)]
    for p in passignments:
        images = {x: step(system, x, p) for x in vals}
        for x in vals:
            for y in vals:
                if tuple_le(x, y) and not tuple_le(images[x], images[y]):
                    return False
    return True


def all_param_assignments(num_params: int) -> list[ParamAssignment]:
    """Every parameter assignment, in lexicographic order of the packed index."""
    return [tuple((j >> k) & 1 for k in range(num_params)) for j in range(1 << num_params)]


def param_masks(num_params: int) -> tuple[ParamAssignment, int]:
    """Packed truth-table masks enumerating all 2**P assignments at once.

    Returns (masks, ones) where bit j of masks[k] is the value of parameter
    k in assignment j, and ones is the all-ones mask of width 2**P.  Feeding
    these to the evaluation functions computes all assignments in one pass.
    """
    width = 1 << num_params
    ones = (1 << width) - 1
    masks = []
    for k in range(num_params):
        m = 0
        for j in range(width):
            if (j >> k) & 1:
                m |= 1 << j
        masks.append(m)
    return tuple(masks), ones


def decode_param_slice(num_params: int, j: int) -> ParamAssignment:
    """The concrete assignment behind bit position j of a packed run."""
    return tuple((j >> k) & 1 for k in range(num_params))
