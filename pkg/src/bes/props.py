"""Executable property suites behind the ``verify`` command.

Each check returns None on success or a Counterexample describing the
failing system, parameter assignment, and coordinate.  Checks accept an
explicit parameter assignment or, with ``params=None``, sweep every
assignment at once using packed bitmasks (one bit per assignment), so a
single pass covers all 2**P parameter choices.

The suites:

* ``equality``: pruned value = iterated fixpoint = expanded value.
* ``pruned_le_expanded``: the one-sided bound checked before equality.
* ``prune_le_iterate``: each partially masked pruned term is bounded by the
  matching equation applied to a late enough plain iterate.
* ``zero_prefix``: once an equation is 0 at some iterate, it is 0 at every
  earlier iterate.
* ``masking_preserves_iterates``: pinning an equation that evaluates to 0
  at iterate m does not change any iterate up to m.
* ``masked_le_pruned``: an equation applied to a masked iterate never
  exceeds the matching pruned term.
* ``self_substitution``: replacing an equation's own variable by 0 inside
  its right-hand side leaves the least fixpoint unchanged.
* ``memo_keys``: restricted-key and full-key pruned builders agree.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .core import (
    Const,
    IndexSet,
    ParamAssignment,
    System,
    Valuation,
    decode_param_slice,
    eval_formula,
    kleene_lfp,
    param_masks,
    substitute_var,
)
from .dag import (
    PrunedBuilder,
    build_expanded,
    build_pruned,
    build_pruned_reference,
    eval_dag,
    node_values,
)
from .gen import gen_random_monotone


@dataclass(frozen=True)
class Counterexample:
    suite: str
    system: System
    params: ParamAssignment
    detail: str


def _param_bits(system: System, params: ParamAssignment | None):
    """(bits, ones) for a single assignment or the packed all-assignments sweep."""
    if params is not None:
        if len(params) != system.num_params:
            raise ValueError("parameter assignment has the wrong length")
        return params, 1
    return param_masks(system.num_params)


def _bad_slice(bad_mask: int) -> int:
    return (bad_mask & -bad_mask).bit_length() - 1


def _decode(system: System, params: ParamAssignment | None, bad_mask: int) -> ParamAssignment:
    if params is not None:
        return params
    return decode_param_slice(system.num_params, _bad_slice(bad_mask))


def _all_subsets(n: int) -> list[IndexSet]:
    return [frozenset(i for i in range(n) if (m >> i) & 1) for m in range(1 << n)]


def _subsets(system: System, subsets: Iterable[IndexSet] | None) -> list[IndexSet]:
    if subsets is not None:
        return list(subsets)
    if system.n > 14:
        raise ValueError("exhaustive subset sweep is too large; pass a subset sample")
    return _all_subsets(system.n)


def _iterates(
    system: System, masked: IndexSet, pbits: Sequence[int], ones: int, upto: int
) -> list[Valuation]:
    """Masked iterates x^0 .. x^upto starting from all zeros."""
    out = [(0,) * system.n]
    x = out[0]
    for _ in range(upto):
        x = tuple(
            0 if i in masked else eval_formula(system.formulas[i], x, pbits, ones)
            for i in range(system.n)
        )
        out.append(x)
    return out


def _pruned_term_values(
    system: System,
    pbits: Sequence[int],
    ones: int,
    subsets: list[IndexSet],
) -> dict[tuple[int, IndexSet], int]:
    """Value of every (masked set, equation) pruned subterm, in one shared DAG."""
    builder = PrunedBuilder(system)
    tids = {
        (i, masked): builder.term(masked, i)
        for masked in subsets
        for i in range(system.n)
    }
    builder.dag.set_roots(tuple(builder.term(frozenset(), i) for i in range(system.n)))
    builder.dag.freeze()
    values = node_values(builder.dag, system, pbits, ones)
    return {key: values[tid] for key, tid in tids.items()}


def check_equality(
    system: System,
    params: ParamAssignment | None = None,
    subsets: Iterable[IndexSet] | None = None,
) -> Counterexample | None:
    """Both closed forms evaluate to the iterated least fixpoint, bit for bit."""
    pbits, ones = _param_bits(system, params)
    iterated, _ = kleene_lfp(system, pbits, ones)
    pruned = eval_dag(build_pruned(system), system, pbits, ones)
    expanded = eval_dag(build_expanded(system), system, pbits, ones)
    for i in range(system.n):
        bad = (iterated[i] ^ pruned[i]) | (iterated[i] ^ expanded[i])
        if bad:
            return Counterexample(
                "equality",
                system,
                _decode(system, params, bad),
                f"coordinate {system.var_names[i]}: iterated={bool(iterated[i] & bad)} "
                f"pruned={bool(pruned[i] & bad)} expanded={bool(expanded[i] & bad)}",
            )
    return None


def check_pruned_le_expanded(
    system: System,
    params: ParamAssignment | None = None,
    subsets: Iterable[IndexSet] | None = None,
) -> Counterexample | None:
    """The pruned value never exceeds the expanded value, coordinatewise."""
    pbits, ones = _param_bits(system, params)
    pruned = eval_dag(build_pruned(system), system, pbits, ones)
    expanded = eval_dag(build_expanded(system), system, pbits, ones)
    for i in range(system.n):
        bad = pruned[i] & ~expanded[i] & ones
        if bad:
            return Counterexample(
                "pruned_le_expanded",
                system,
                _decode(system, params, bad),
                f"coordinate {system.var_names[i]}: pruned=1 but expanded=0",
            )
    return None


def check_prune_le_iterate(
    system: System,
    params: ParamAssignment | None = None,
    subsets: Iterable[IndexSet] | None = None,
) -> Counterexample | None:
    """Masked pruned terms are bounded by the equation at a late plain iterate.

    For every proper masked set S and equation i, the pruned subterm for
    (S, i) is at most f_i applied to the (n - |S| - 1)-th plain iterate.
    """
    pbits, ones = _param_bits(system, params)
    n = system.n
    subs = [s for s in _subsets(system, subsets) if len(s) < n]
    values = _pruned_term_values(system, pbits, ones, subs)
    plain = _iterates(system, frozenset(), pbits, ones, n)
    for masked in subs:
        m = n - len(masked) - 1
        for i in range(n):
            rhs = eval_formula(system.formulas[i], plain[m], pbits, ones)
            bad = values[(i, masked)] & ~rhs & ones
            if bad:
                return Counterexample(
                    "prune_le_iterate",
                    system,
                    _decode(system, params, bad),
                    f"masked={sorted(masked)} equation={system.var_names[i]}: "
                    f"pruned term exceeds iterate bound at m={m}",
                )
    return None


def check_zero_prefix(
    system: System,
    params: ParamAssignment | None = None,
    subsets: Iterable[IndexSet] | None = None,
) -> Counterexample | None:
    """If an equation is 0 at iterate m, it is 0 at every iterate up to m."""
    pbits, ones = _param_bits(system, params)
    n = system.n
    plain = _iterates(system, frozenset(), pbits, ones, n)
    applied = [
        [eval_formula(f, plain[m], pbits, ones) for m in range(n + 1)]
        for f in system.formulas
    ]
    for i in range(n):
        for m in range(n + 1):
            zero_at_m = ~applied[i][m] & ones
            for earlier in range(m):
                bad = applied[i][earlier] & zero_at_m
                if bad:
                    return Counterexample(
                        "zero_prefix",
                        system,
                        _decode(system, params, bad),
                        f"equation {system.var_names[i]}: 0 at iterate {m} "
                        f"but 1 at iterate {earlier}",
                    )
    return None


def check_masking_preserves_iterates(
    system: System,
    params: ParamAssignment | None = None,
    subsets: Iterable[IndexSet] | None = None,
) -> Counterexample | None:
    """Pinning a dead equation to 0 leaves earlier masked iterates unchanged.

    If f_i evaluates to 0 at the m-th iterate masked by S, then masking
    S and masking S + {i} produce identical iterates up to m.
    """
    pbits, ones = _param_bits(system, params)
    n = system.n
    iterates: dict[IndexSet, list[Valuation]] = {}

    def iters(masked: IndexSet) -> list[Valuation]:
        got = iterates.get(masked)
        if got is None:
            got = _iterates(system, masked, pbits, ones, n)
            iterates[masked] = got
        return got

    for masked in _subsets(system, subsets):
        for i in range(n):
            if i in masked:
                continue
            with_i = masked | {i}
            for m in range(n + 1):
                dead = ~eval_formula(system.formulas[i], iters(masked)[m], pbits, ones) & ones
                if not dead:
                    continue
                for p in range(m + 1):
                    for j in range(n):
                        bad = (iters(masked)[p][j] ^ iters(with_i)[p][j]) & dead
                        if bad:
                            return Counterexample(
                                "masking_preserves_iterates",
                                system,
                                _decode(system, params, bad),
                                f"masked={sorted(masked)} pinned={system.var_names[i]}: "
                                f"iterate {p} differs at {system.var_names[j]} (m={m})",
                            )
    return None


def check_masked_le_pruned(
    system: System,
    params: ParamAssignment | None = None,
    subsets: Iterable[IndexSet] | None = None,
) -> Counterexample | None:
    """An equation applied to a masked iterate never exceeds its pruned term.

    For every masked set S, equation i outside S, and 0 <= m <= n - |S|,
    f_i at the m-th S-masked iterate is at most the pruned (S, i) term.
    """
    pbits, ones = _param_bits(system, params)
    n = system.n
    subs = _subsets(system, subsets)
    values = _pruned_term_values(system, pbits, ones, subs)
    for masked in subs:
        upto = n - len(masked)
        masked_iter = _iterates(system, masked, pbits, ones, upto)
        for i in range(n):
            if i in masked:
                continue  # pinned side is constant 0, trivially bounded
            for m in range(upto + 1):
                lhs = eval_formula(system.formulas[i], masked_iter[m], pbits, ones)
                bad = lhs & ~values[(i, masked)] & ones
                if bad:
                    return Counterexample(
                        "masked_le_pruned",
                        system,
                        _decode(system, params, bad),
                        f"masked={sorted(masked)} equation={system.var_names[i]} m={m}: "
                        f"masked application exceeds the pruned term",
                    )
    return None


def check_self_substitution(
    system: System,
    params: ParamAssignment | None = None,
    subsets: Iterable[IndexSet] | None = None,
) -> Counterexample | None:
    """Replacing x_i by 0 inside its own equation preserves the least fixpoint."""
    pbits, ones = _param_bits(system, params)
    base, _ = kleene_lfp(system, pbits, ones)
    for i in range(system.n):
        formulas = list(system.formulas)
        formulas[i] = substitute_var(formulas[i], i, Const(0))
        rewritten = System(tuple(formulas), system.var_names, system.param_names)
        other, _ = kleene_lfp(rewritten, pbits, ones)
        for j in range(system.n):
            bad = (base[j] ^ other[j]) & ones
            if bad:
                return Counterexample(
                    "self_substitution",
                    system,
                    _decode(system, params, bad),
                    f"zeroing {system.var_names[i]} inside its own equation "
                    f"changed the fixpoint at {system.var_names[j]}",
                )
    return None


def check_memo_keys(
    system: System,
    params: ParamAssignment | None = None,
    subsets: Iterable[IndexSet] | None = None,
) -> Counterexample | None:
    """Restricted-key and full-key pruned builders evaluate identically."""
    pbits, ones = _param_bits(system, params)
    canonical = eval_dag(build_pruned(system), system, pbits, ones)
    reference = eval_dag(build_pruned_reference(system), system, pbits, ones)
    for i in range(system.n):
        bad = (canonical[i] ^ reference[i]) & ones
        if bad:
            return Counterexample(
                "memo_keys",
                system,
                _decode(system, params, bad),
                f"builders disagree at {system.var_names[i]}",
            )
    return None


Check = Callable[..., Counterexample | None]

SUITES: dict[str, Check] = {
    "equality": check_equality,
    "pruned_le_expanded": check_pruned_le_expanded,
    "prune_le_iterate": check_prune_le_iterate,
    "zero_prefix": check_zero_prefix,
    "masking_preserves_iterates": check_masking_preserves_iterates,
    "masked_le_pruned": check_masked_le_pruned,
    "self_substitution": check_self_substitution,
    "memo_keys": check_memo_keys,
}


def run_all(
    system: System,
    params: ParamAssignment | None = None,
    subsets: Iterable[IndexSet] | None = None,
) -> list[Counterexample]:
    """Run every suite on one system; empty list means all passed."""
    subs = _subsets(system, subsets)
    out = []
    for check in SUITES.values():
        cex = check(system, params, subs)
        if cex is not None:
            out.append(cex)
    return out


@dataclass
class SuiteTally:
    name: str
    passed: int = 0
    failed: int = 0
    failures: list[Counterexample] | None = None

    def record(self, cex: Counterexample | None) -> None:
        if cex is None:
            self.passed += 1
        else:
            self.failed += 1
            if self.failures is None:
                self.failures = []
            self.failures.append(cex)


def run_random_battery(
    trials: int,
    seed: int,
    max_n: int = 6,
    max_params: int = 2,
    max_depth: int = 4,
) -> list[SuiteTally]:
    """Seeded random systems through every suite, all parameter assignments."""
    rng = random.Random(seed)
    tallies = [SuiteTally(name) for name in SUITES]
    for _ in range(trials):
        n = rng.randint(1, max_n)
        num_params = rng.randint(0, max_params)
        system = gen_random_monotone(n, num_params, max_depth, rng.randrange(2**62))
        subs = _all_subsets(n)
        for tally, check in zip(tallies, SUITES.values()):
            tally.record(check(system, None, subs))
    return tallies
