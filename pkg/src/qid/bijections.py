"""The length-changing pairing alpha_k on D(n, k) and the multi-index reduction built on it.

D(n, k) is the set of strict partitions of n with
``lambda_1 - lambda_ell < k <= lambda_1``. Class A holds the members with no
part divisible by k and class B the rest. alpha_k appends a zero part,
then keeps moving k units from the current maximum into that new slot
until the spread drops below k, and finally sorts.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .partitions import StrictPartition, enumerate_strict_partitions, format_partition


class PreconditionError(ValueError):
    """Input outside the domain of the map."""


class NonTerminationError(RuntimeError):
    """An iteration guard fired."""


class StrictnessViolation(RuntimeError):
    """A reduction stage stopped being a strict partition of the original length."""


def in_domain(parts, k: int) -> bool:
    return parts[0] >= k > parts[0] - parts[-1]


@dataclass(frozen=True)
class PairingDomain:
    n: int
    k: int
    members: tuple[StrictPartition, ...]
    class_a: tuple[StrictPartition, ...]
    class_b: tuple[StrictPartition, ...]


def build_domain(n: int, k: int) -> PairingDomain:
    if n < 1 or k < 1:
        raise ValueError("n and k must be >= 1")
    members, a, b = [], [], []
    for lam in enumerate_strict_partitions(n):
        parts = lam.parts
        if parts[0] < k:
            break  # lex-decreasing order: every later lambda_1 is smaller too
        if parts[0] - parts[-1] >= k:
            continue
        members.append(lam)
        (b if any(p % k == 0 for p in parts) else a).append(lam)
    return PairingDomain(n, k, tuple(members), tuple(a), tuple(b))


def alpha_k_steps(lam, k: int) -> list[tuple[int, ...]]:
    """Every composition visited by alpha_k, from the zero-padded input to the last move.

    When several entries share the maximum, the leftmost one gives up k.
    The appended slot is never the donor; it is the only entry divisible by
    k, so skipping it keeps the choice well defined.
    """
    parts = tuple(lam)
    if not parts or k < 1:
        raise PreconditionError("alpha_k needs a nonempty partition and k >= 1")
    if any(a <= b for a, b in zip(parts, parts[1:])):
        raise PreconditionError(f"{format_partition(parts)} is not strict")
    if not in_domain(parts, k):
        raise PreconditionError(f"{format_partition(parts)} is not in D({sum(parts)},{k})")
    if any(p % k == 0 for p in parts):
        raise PreconditionError(f"{format_partition(parts)} has a part divisible by {k} (class B)")

    x = list(parts) + [0]
    last = len(parts)
    guard = sum(parts) // k + len(parts) + 2
    steps = [tuple(x)]
    while max(x) - min(x) >= k:
        if len(steps) > guard:
            raise NonTerminationError(f"alpha_{k} exceeded {guard} moves on {format_partition(parts)}")
        donors = x[:last]
        i = donors.index(max(donors))
        x[i] -= k
        x[last] += k
        steps.append(tuple(x))
    return steps


def alpha_k(lam, k: int) -> StrictPartition:
    """Image of a class-A member under alpha_k; one part longer and in class B."""
    final = alpha_k_steps(lam, k)[-1]
    return StrictPartition(tuple(sorted(final, reverse=True)))


@dataclass
class PairingReport:
    n: int
    k: int
    pairs: list[tuple[StrictPartition, StrictPartition]]
    unpaired: list[StrictPartition]
    injective: bool
    image_exact: bool
    residues_preserved: bool = True
    problems: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.injective and self.image_exact and self.residues_preserved

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "pairs": [[format_partition(a), format_partition(b)] for a, b in self.pairs],
            "unpaired": [format_partition(u) for u in self.unpaired],
            "injective": self.injective,
            "image_exact": self.image_exact,
            "residues_preserved": self.residues_preserved,
            "problems": self.problems,
        }


def residue_profile(parts, k: int) -> dict[int, int]:
    """Number of parts in each nonzero residue class mod k."""
    prof: dict[int, int] = {}
    for p in parts:
        r = p % k
        if r:
            prof[r] = prof.get(r, 0) + 1
    return prof


def verify_pairing(n: int, k: int) -> PairingReport:
    """Apply alpha_k to all of class A and check it is a bijection onto B minus the all-divisible members."""
    dom = build_domain(n, k)
    pairs, problems = [], []
    residues_ok = True
    for lam in dom.class_a:
        try:
            img = alpha_k(lam, k)
        except (PreconditionError, NonTerminationError, ValueError) as exc:
            problems.append(f"{format_partition(lam)}: {exc}")
            continue
        if residue_profile(lam, k) != residue_profile(img, k):
            residues_ok = False
            problems.append(f"residues changed: {format_partition(lam)} -> {format_partition(img)}")
        if img.length != lam.length + 1:
            problems.append(f"length not incremented: {format_partition(lam)} -> {format_partition(img)}")
        pairs.append((lam, img))

    images = [img for _, img in pairs]
    injective = len(set(images)) == len(images) and not problems
    residual = {b for b in dom.class_b if all(p % k == 0 for p in b)}
    target = set(dom.class_b) - residual
    image_exact = set(images) == target and len(pairs) == len(dom.class_a)
    hit = set(images)
    unpaired = [b for b in dom.class_b if b not in hit]
    return PairingReport(n, k, pairs, unpaired, injective, image_exact, residues_ok, problems)


def alpha_k_preimage(lam, k: int) -> Optional[StrictPartition]:
    """The class-A member mapped onto ``lam`` by alpha_k, or None (search over the domain)."""
    lam = StrictPartition(tuple(lam))
    for a in build_domain(lam.weight, k).class_a:
        if alpha_k(a, k) == lam:
            return a
    return None


@dataclass
class ReductionTrace:
    """Stages of the multi-index reduction.

    ``terminal`` is "paired" when the last stage takes part in the alpha_{j_m}
    pairing, "leftover" when it is a single part divisible by j_m (then
    ``rectangles`` lists the stacked (width, height) blocks), and
    "unclassified" if the last stage falls outside D(n, j_m).
    """

    partition: StrictPartition
    indices: tuple[int, ...]
    stages: list[StrictPartition]
    widths: list[int]
    steps: list[int]
    terminal: str
    partner: Optional[StrictPartition] = None
    rectangles: list[tuple[int, int]] = field(default_factory=list)
    anomalies: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "partition": format_partition(self.partition),
            "indices": list(self.indices),
            "stages": [format_partition(s) for s in self.stages],
            "widths": self.widths,
            "steps": self.steps,
            "terminal": self.terminal,
            "partner": format_partition(self.partner) if self.partner is not None else None,
            "rectangles": [list(r) for r in self.rectangles],
            "anomalies": self.anomalies,
        }


def thm41_reduce(lam, indices) -> ReductionTrace:
    """Experimental trace of the reduction from m marked columns to the alpha pairing.

    Stage h uses width j_h = a_{1, i_{m+1-h}} of the current stage and
    repeatedly lowers the largest part by j_h until a_{1, i_{m-h}} <= j_h.
    The last stage has no stop index; it is classified by alpha_{j_m} alone.
    """
    lam = StrictPartition(tuple(lam))
    idx = tuple(indices)
    m = len(idx)
    if m == 0 or any(a >= b for a, b in zip(idx, idx[1:])) or idx[0] < 1 or idx[-1] > lam.smallest:
        raise PreconditionError(f"indices {idx} must be increasing within 1..{lam.smallest}")
    one_based = (None,) + idx

    stages = [lam]
    widths: list[int] = []
    steps: list[int] = []
    anomalies: list[str] = []
    mu = list(lam.parts)
    for h in range(1, m + 1):
        width = mu[0] - one_based[m + 1 - h] + 1
        widths.append(width)
        if h == m:
            break
        stop_col = one_based[m - h]
        guard = sum(mu) // width + 1
        count = 0
        while mu[0] - stop_col + 1 > width:
            if count > guard:
                raise NonTerminationError(f"stage {h} of {format_partition(lam)} did not stop")
            mu[0] -= width
            mu.sort(reverse=True)
            count += 1
            if mu[-1] < 1 or any(a <= b for a, b in zip(mu, mu[1:])):
                raise StrictnessViolation(
                    f"stage {h} of {format_partition(lam)} {idx} produced {format_partition(mu)}"
                )
        steps.append(count)
        stages.append(StrictPartition(tuple(mu)))

    if any(a < b for a, b in zip(widths, widths[1:])):
        anomalies.append(f"widths not weakly decreasing: {widths}")

    last = stages[-1]
    j_m = widths[-1]
    trace = ReductionTrace(lam, idx, stages, widths, steps, "unclassified", anomalies=anomalies)
    if not in_domain(last.parts, j_m):
        anomalies.append(f"last stage {format_partition(last)} is outside D({last.weight},{j_m})")
        return trace
    if last.length == 1 and last.parts[0] % j_m == 0:
        trace.terminal = "leftover"
        trace.steps.append(last.parts[0] // j_m)
        trace.rectangles = list(zip(widths, trace.steps))
        return trace
    trace.terminal = "paired"
    if any(p % j_m == 0 for p in last.parts):
        trace.partner = alpha_k_preimage(last, j_m)
    else:
        trace.partner = alpha_k(last, j_m)
    return trace


def rectangles_to_partition(rectangles) -> tuple[int, ...]:
    """Stack (width, height) blocks, widest first, into a partition."""
    out: list[int] = []
    for width, height in sorted(rectangles, key=lambda r: -r[0]):
        out.extend([width] * height)
    return tuple(out)
