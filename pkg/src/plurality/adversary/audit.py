"""Replays a transcript through an adversary strategy and checks the counting inequalities."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction

from ..core import GameConfig, normalize_partition
from .aux import BLUE, GREEN, RED, AuxGraph
from .base import CONDITIONED
from .generalk import GeneralKAdversary
from .k3 import Even3Adversary, Odd3Adversary

VARIANTS = ("even3", "odd3", "generalk_even", "generalk_odd")


class AuditMismatch(ValueError):
    """The transcript (or aux graph) was not produced by the named strategy."""


def log2_at_most(m: Fraction | int, n: int, factor: int = 1) -> bool:
    """Exact test of ``m <= factor * log2(n)`` for rational m, using n**(factor*q) >= 2**p."""
    m = Fraction(m)
    if m <= 0:
        return True
    return n ** (factor * m.denominator) >= 2 ** m.numerator


def lower_bound_expr(variant: str, n: int, k: int) -> tuple[Fraction, Fraction]:
    """Lower bound as ``a - b*log2(n)`` with rational a, b."""
    if variant == "even3":
        return Fraction(3 * n, 4) - 2, Fraction(0)
    if variant == "odd3":
        return Fraction(3 * n, 4) - 5, Fraction(1, 2)
    if variant == "generalk_even":
        return Fraction(n - 2, k - 1) + Fraction(n, 2 * (k - 1) ** 2), Fraction(0)
    return Fraction(n - 5, k - 1) + Fraction(n - k, 2 * (k - 1) ** 2), Fraction(0)


def at_least_bound(w: Fraction, variant: str, n: int, k: int) -> bool:
    a, b = lower_bound_expr(variant, n, k)
    # w >= a - b*log2 n  <=>  a - w <= b*log2 n
    if b == 0:
        return w >= a
    return log2_at_most((a - w) / b, n)


@dataclass
class ComponentReport:
    size: int
    d: int
    red_edges: int
    deficient: bool
    p3c: tuple[int, ...]


@dataclass
class WeightReport:
    variant: str
    n: int
    k: int
    counts: dict[str, int]
    total_weight: Fraction
    components: list[ComponentReport]
    checks: dict[str, bool | None] = field(default_factory=dict)
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def _check(self, name: str, passed: bool, detail: str = "") -> None:
        prev = self.checks.get(name)
        self.checks[name] = bool(passed) and prev is not False
        if not passed:
            self.failures.append(f"{name}: {detail}" if detail else name)

    def to_json(self) -> dict:
        return {
            "variant": self.variant,
            "n": self.n,
            "k": self.k,
            "counts": self.counts,
            "total_weight": str(self.total_weight),
            "checks": self.checks,
            "failures": self.failures,
        }


def make_strategy(variant: str, config: GameConfig):
    if variant == "even3":
        return Even3Adversary(config)
    if variant == "odd3":
        return Odd3Adversary(config)
    if variant in ("generalk_even", "generalk_odd"):
        if (config.n % 2 == 1) != (variant == "generalk_odd"):
            raise AuditMismatch(f"variant {variant} does not match n={config.n}")
        return GeneralKAdversary(config)
    raise ValueError(f"unknown audit variant {variant!r}; expected one of {', '.join(VARIANTS)}")


def variant_for(adversary_name: str, n: int) -> str | None:
    """Audit variant matching an adversary registry name, if it has one."""
    if adversary_name in ("even3", "odd3"):
        return adversary_name
    if adversary_name == "generalk":
        return "generalk_odd" if n % 2 else "generalk_even"
    return None


def _step_weights(aux: AuxGraph) -> dict[int, Fraction]:
    out: dict[int, Fraction] = defaultdict(Fraction)
    for e in aux.edges:
        out[e.step] += aux.weights[e.color]
    return out


def _component_reports(adv, aux: AuxGraph) -> list[ComponentReport]:
    out = []
    for c in aux.red_components():
        p3c = tuple(v for v in c.vertices if c.deficient and aux.degree(v, BLUE) == 0)
        out.append(ComponentReport(c.size, c.imbalance, c.red_edges, c.deficient, p3c))
    return out


def _conditioned_checks(report: WeightReport, adv, step: int) -> None:
    aux: AuxGraph = adv.aux
    comps = aux.red_components()
    report._check(
        "components_match",
        sorted(c.vertices for c in comps) == aux.components(),
        f"step {step}: components of G and G_R differ",
    )
    for c in comps:
        report._check("red_bipartite", c.bipartite, f"step {step}: component {c.vertices[:5]}... not bipartite")
        if c.imbalance == 0:
            bound = c.size
        else:
            bound = c.size + c.imbalance - 2
        report._check(
            "component_red_edges",
            c.red_edges >= bound,
            f"step {step}: |V|={c.size} d={c.imbalance} e_R={c.red_edges} < {bound}",
        )
        if report.variant == "odd3" and c.deficient:
            p3c = [v for v in c.vertices if aux.degree(v, BLUE) == 0]
            report._check("deficient_has_p3c", bool(p3c), f"step {step}: deficient component without p3c ball")
            low = min((aux.degree(v, RED) for v in p3c), default=None)
            report._check(
                "p3c_red_degree",
                low is not None and 2 ** low <= c.size**2,
                f"step {step}: |V|={c.size}, smallest p3c red-degree {low}",
            )


def _end_checks(report: WeightReport, adv) -> None:
    n, k = report.n, report.k
    counts = report.counts
    red, blue, green = counts[RED], counts[BLUE], counts[GREEN]
    v = report.variant
    if v == "even3":
        report._check("end_blue", blue >= n - 2, f"blue={blue} < n-2={n - 2}")
        report._check("end_red", red >= n - 4, f"red={red} < n-4={n - 4}")
    elif v == "odd3":
        # red >= n - 10 - 2 log2 n
        report._check("end_red", log2_at_most(n - 10 - red, n, 2), f"red={red} < n-10-2log2(n) for n={n}")
        report._check("end_blue_green", blue + green >= n - 5, f"blue+green={blue + green} < n-5={n - 5}")
    elif v == "generalk_even":
        report._check("end_blue", blue >= n - 2, f"blue={blue} < n-2={n - 2}")
        report._check("end_red", 2 * red >= n, f"red={red} < n/2")
    else:
        report._check("end_blue_green", blue + green >= n - 5, f"blue+green={blue + green} < n-5={n - 5}")
        report._check("end_red", 2 * red >= n - k, f"red={red} < (n-k)/2")
    report._check(
        "end_weight",
        at_least_bound(report.total_weight, v, n, k),
        f"weight={report.total_weight} below the lower-bound expression",
    )


def audit(transcript, aux: AuxGraph | None, variant: str, solved: bool | None = None) -> WeightReport:
    """Replay ``transcript`` through the named strategy and check every inequality.

    ``transcript`` needs ``config`` and ``steps`` (a list of (query, parts));
    ``solved`` defaults to whether it carries a declaration. End-state checks
    only run for solved games. Raises :class:`AuditMismatch` when the answers or
    the final aux graph differ from what the strategy produces.
    """
    config: GameConfig = transcript.config
    adv = make_strategy(variant, config)
    if solved is None:
        solved = getattr(transcript, "declaration", None) is not None
    report = WeightReport(variant, config.n, config.k, {}, Fraction(0), [])
    report.checks["answer_weight"] = True
    three = variant in ("even3", "odd3")
    for step, (query, parts) in enumerate(transcript.steps):
        got = adv.answer(query)
        if normalize_partition(parts) != got:
            raise AuditMismatch(f"step {step}: transcript answer {parts} but {variant} answers {got}")
        if adv.phase == CONDITIONED and three:
            _conditioned_checks(report, adv, step)
        w = _step_weights(adv.aux)
        report._check("answer_weight", max(w.values(), default=0) <= 1, f"step {step}: weight {max(w.values())} > 1")
    if aux is not None and aux.snapshot() != adv.aux.snapshot():
        raise AuditMismatch("aux graph does not match the replayed strategy")
    final = adv.aux
    report.counts = final.counts()
    report.total_weight = final.total_weight()
    report.components = _component_reports(adv, final)
    if solved and transcript.steps:
        _end_checks(report, adv)
    return report
