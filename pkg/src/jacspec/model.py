"""Deterministic entry sequences and specifications for Jacobi matrices.

A Jacobi matrix is the half-line tridiagonal operator built from a positive
off-diagonal sequence (a_n) and a real diagonal sequence (b_n).  This module
provides pure, random-accessible generators for such sequences, the four
spec variants used throughout the package (explicit, periodically modulated,
periodically blended, growth-regulated), and a JSON interface with
field-level error reporting.

All values are float64.  For indices beyond ~1e7 the cumulative
constructions can accumulate rounding at the 1e-12 level; pass
``extended=True`` to :func:`gamma_to_atilde` to accumulate in longdouble.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

import numpy as np


class SpecError(ValueError):
    """A spec object or spec file is malformed.

    ``field`` holds a dotted path such as ``"a.exponent"`` when the offending
    value can be localized.
    """

    def __init__(self, message: str, field: Optional[str] = None):
        self.field = field
        super().__init__(message if field is None else f"{field}: {message}")


# ---------------------------------------------------------------------------
# periodic sequences
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PeriodicSeq:
    """An N-periodic real sequence indexed over all integers."""

    values: tuple

    def __post_init__(self):
        if len(self.values) < 1:
            raise SpecError("periodic sequence needs at least one value")
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))

    @property
    def period(self) -> int:
        return len(self.values)

    def __getitem__(self, n: int) -> float:
        # Python's % maps negative indices onto [0, N), which is exactly the
        # two-sided periodic extension.
        return self.values[n % len(self.values)]

    def sample(self, idx: np.ndarray) -> np.ndarray:
        return np.asarray(self.values)[np.asarray(idx) % len(self.values)]

    def all_positive(self) -> bool:
        return all(v > 0 for v in self.values)


def require_positive(seq: PeriodicSeq, field: str) -> PeriodicSeq:
    for i, v in enumerate(seq.values):
        if not v > 0:
            raise SpecError(f"value {v!r} at position {i} must be positive", field)
    return seq


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------

class SequenceGen:
    """A pure map n -> x_n for n >= 0, random accessible and vectorized.

    Subclasses implement :meth:`sample` on integer arrays; scalar access and
    range materialization are derived from it.
    """

    kind = "abstract"

    def sample(self, idx: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def at(self, n: int) -> float:
        return float(self.sample(np.asarray([n]))[0])

    def range_values(self, n_max: int) -> np.ndarray:
        """Values at indices 0..n_max inclusive."""
        return self.sample(np.arange(n_max + 1))


@dataclass(frozen=True)
class PowerGen(SequenceGen):
    """x_n = scale * (n+1)**exponent."""

    exponent: float
    scale: float = 1.0
    kind = "power"

    def sample(self, idx):
        return self.scale * np.power(np.asarray(idx, dtype=float) + 1.0, self.exponent)


@dataclass(frozen=True)
class LogPowerGen(SequenceGen):
    """x_n = scale * (n+1)**p * log(n+2)**q; the default is (n+1) log^2(n+2)."""

    p: float = 1.0
    q: float = 2.0
    scale: float = 1.0
    kind = "log-power"

    def sample(self, idx):
        n = np.asarray(idx, dtype=float)
        return self.scale * np.power(n + 1.0, self.p) * np.power(np.log(n + 2.0), self.q)


@dataclass(frozen=True)
class TableGen(SequenceGen):
    """Finite table of values; access past the end is an error."""

    table: tuple
    kind = "table"

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(float(v) for v in self.table))

    def sample(self, idx):
        idx = np.asarray(idx)
        if idx.size and int(idx.max()) >= len(self.table):
            raise SpecError(
                f"index {int(idx.max())} beyond table of length {len(self.table)}"
            )
        if idx.size and int(idx.min()) < 0:
            raise SpecError(f"negative index {int(idx.min())}")
        return np.asarray(self.table)[idx]


@dataclass(frozen=True)
class PeriodicGen(SequenceGen):
    """Periodic repetition of a finite block, as a generator."""

    block: tuple
    kind = "periodic"

    def __post_init__(self):
        object.__setattr__(self, "block", tuple(float(v) for v in self.block))

    def sample(self, idx):
        return np.asarray(self.block)[np.asarray(idx) % len(self.block)]


_EXPR_NAMES = {
    "log": np.log, "log2": np.log2, "log10": np.log10, "exp": np.exp,
    "sqrt": np.sqrt, "sin": np.sin, "cos": np.cos, "tan": np.tan,
    "abs": np.abs, "floor": np.floor, "ceil": np.ceil,
    "minimum": np.minimum, "maximum": np.maximum, "where": np.where,
    "pi": math.pi, "e": math.e,
}


@dataclass(frozen=True)
class ExprGen(SequenceGen):
    """User expression in the variable n, evaluated with numpy semantics.

    Only arithmetic and the whitelisted functions in ``_EXPR_NAMES`` are
    available; builtins are disabled.
    """

    expr: str
    kind = "expr"

    def __post_init__(self):
        try:
            code = compile(self.expr, "<sequence expr>", "eval")
        except SyntaxError as exc:
            raise SpecError(f"invalid expression {self.expr!r}: {exc.msg}") from exc
        for name in code.co_names:
            if name not in _EXPR_NAMES and name != "n":
                raise SpecError(f"name {name!r} not allowed in expression {self.expr!r}")
        object.__setattr__(self, "_code", code)

    def sample(self, idx):
        env = dict(_EXPR_NAMES)
        env["n"] = np.asarray(idx, dtype=float)
        out = eval(self._code, {"__builtins__": {}}, env)  # noqa: S307 - whitelisted names only
        return np.broadcast_to(np.asarray(out, dtype=float), np.shape(env["n"])).copy()


@dataclass(frozen=True)
class ExpSumGen(SequenceGen):
    """x_n = exp(sum_{j=1}^{n} kappa / gamma_j).

    This is the canonical profile whose successive ratios are exactly
    exp(kappa / gamma_n); see :func:`gamma_to_atilde` for the array form.
    """

    kappa: float
    gamma: SequenceGen
    kind = "exp-sum"

    def sample(self, idx):
        idx = np.asarray(idx)
        if idx.size == 0:
            return np.zeros(0)
        n_max = int(idx.max())
        vals = gamma_to_atilde(self.gamma, self.kappa, n_max)
        return vals[idx]


def gamma_to_atilde(gamma: SequenceGen, kappa: float, n_max: int,
                    extended: bool = False) -> np.ndarray:
    """Profile with a-tilde_0 = 1 and a-tilde_n / a-tilde_{n-1} = exp(kappa/gamma_n).

    Built as a cumulative product of the per-step ratios, so each consecutive
    ratio of the output matches exp(kappa/gamma_n) to a couple of ulp.
    ``extended=True`` accumulates in longdouble, useful past n ~ 1e7.
    """

    if n_max < 0:
        raise SpecError("n_max must be >= 0")
    if n_max == 0:
        return np.ones(1)
    j = np.arange(1, n_max + 1)
    g = np.asarray(gamma.sample(j), dtype=float)
    bad = np.nonzero(~(g > 0))[0]
    if bad.size:
        k = int(bad[0])
        raise SpecError(f"gamma_{j[k]} = {g[k]!r} must be positive", field="gamma")
    dtype = np.longdouble if extended else float
    # overflow surfaces as the explicit SpecError below, not as a warning
    with np.errstate(over="ignore"):
        ratios = np.exp(np.asarray(kappa, dtype=dtype) / g.astype(dtype))
        out = np.empty(n_max + 1, dtype=dtype)
        out[0] = 1.0
        np.cumprod(ratios, out=out[1:])
    out = out.astype(float)
    if not np.all(np.isfinite(out)):
        k = int(np.nonzero(~np.isfinite(out))[0][0])
        raise SpecError(f"profile overflows float64 at index {k}; "
                        "reduce n_max or work with logarithms")
    return out


# ---------------------------------------------------------------------------
# spec variants
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExplicitSpec:
    """Entries given directly by generators."""

    a: SequenceGen
    b: SequenceGen
    variant = "explicit"


@dataclass(frozen=True)
class ModulatedSpec:
    """Entries asymptotically proportional to a periodic profile.

    alpha and beta are the N-periodic modulating sequences: a_{n-1}/a_n tracks
    alpha_{n-1}/alpha_n and b_n/a_n tracks beta_n/alpha_n while a_n diverges.
    The optional s and z carry the first-order corrections
    s_n ~ (alpha_{n-1}/alpha_n) a_n - a_{n-1} and
    z_n ~ (beta_n/alpha_n) a_n - b_n used by the critical-case closed forms.
    """

    alpha: PeriodicSeq
    beta: PeriodicSeq
    a: SequenceGen
    b: SequenceGen
    s: Optional[PeriodicSeq] = None
    z: Optional[PeriodicSeq] = None
    variant = "modulated"

    def __post_init__(self):
        require_positive(self.alpha, "alpha")
        _check_periods(self)


@dataclass(frozen=True)
class BlendedSpec:
    """Bounded N-periodic stretches interleaved with two unbounded entries.

    With block length N+2, entry k(N+2)+i equals atilde_{kN+i} for i < N,
    ctilde_{2k} for i = N and ctilde_{2k+1} for i = N+1; the diagonal is
    btilde on the periodic stretch and 0 on the two unbounded positions.
    Defaults: atilde and btilde repeat alpha and beta exactly.
    """

    alpha: PeriodicSeq
    beta: PeriodicSeq
    ctilde: SequenceGen
    atilde: Optional[SequenceGen] = None
    btilde: Optional[SequenceGen] = None
    variant = "blended"

    def __post_init__(self):
        require_positive(self.alpha, "alpha")
        _check_periods(self)

    def atilde_gen(self) -> SequenceGen:
        return self.atilde if self.atilde is not None else PeriodicGen(self.alpha.values)

    def btilde_gen(self) -> SequenceGen:
        return self.btilde if self.btilde is not None else PeriodicGen(self.beta.values)


@dataclass(frozen=True)
class KMSpec:
    """Growth-regulated modulated entries.

    a_n = alpha_n * atilde_n * (1 + f_n / gamma_n) and
    b_n = (beta_n / alpha_n) * a_n, where gamma_n -> infinity regulates the
    growth rate through gamma_n (1 - atilde_{n-1}/atilde_n) -> kappa > 0 and
    f is a bounded perturbation.  When ``atilde`` is omitted it is the
    exp-sum profile of (gamma, kappa), which satisfies the rate condition
    exactly.
    """

    alpha: PeriodicSeq
    beta: PeriodicSeq
    gamma: SequenceGen
    f: SequenceGen
    kappa: float
    atilde: Optional[SequenceGen] = None
    variant = "km"

    def __post_init__(self):
        require_positive(self.alpha, "alpha")
        _check_periods(self)
        if not self.kappa > 0:
            raise SpecError(f"kappa = {self.kappa!r} must be positive", field="kappa")


JacobiSpec = Union[ExplicitSpec, ModulatedSpec, BlendedSpec, KMSpec]


def _check_periods(spec) -> None:
    if spec.alpha.period != spec.beta.period:
        raise SpecError(
            f"alpha has period {spec.alpha.period} but beta has period "
            f"{spec.beta.period}", field="beta")


# ---------------------------------------------------------------------------
# entry construction
# ---------------------------------------------------------------------------

def _check_offdiagonal(a: np.ndarray, what: str = "a") -> np.ndarray:
    bad = np.nonzero(~(a > 0) | ~np.isfinite(a))[0]
    if bad.size:
        k = int(bad[0])
        raise SpecError(f"{what}_{k} = {a[k]!r}; off-diagonal entries must be "
                        "positive and finite")
    return a


def build(spec: JacobiSpec, n_max: int):
    """Materialize (a_0..a_n_max, b_0..b_n_max) for a spec.

    Raises :class:`SpecError` naming the first offending index if any
    off-diagonal entry fails to be positive and finite.
    """

    if n_max < 0:
        raise SpecError("n_max must be >= 0")
    idx = np.arange(n_max + 1)

    if isinstance(spec, (ExplicitSpec, ModulatedSpec)):
        a = np.asarray(spec.a.sample(idx), dtype=float)
        b = np.asarray(spec.b.sample(idx), dtype=float)
        return _check_offdiagonal(a), b

    if isinstance(spec, KMSpec):
        gam = np.asarray(spec.gamma.sample(idx), dtype=float)
        if spec.atilde is not None:
            atl = np.asarray(spec.atilde.sample(idx), dtype=float)
        else:
            atl = gamma_to_atilde(spec.gamma, spec.kappa, n_max)
        f = np.asarray(spec.f.sample(idx), dtype=float)
        alpha = spec.alpha.sample(idx)
        beta = spec.beta.sample(idx)
        with np.errstate(divide="ignore", invalid="ignore"):
            a = alpha * atl * (1.0 + f / gam)
            b = (beta / alpha) * a
        return _check_offdiagonal(a), b

    if isinstance(spec, BlendedSpec):
        N = spec.alpha.period
        block = N + 2
        k = idx // block
        i = idx % block
        k_last = int(k.max())
        atl = np.asarray(spec.atilde_gen().sample(
            np.arange((k_last + 1) * N)), dtype=float) if N else np.zeros(0)
        btl = np.asarray(spec.btilde_gen().sample(
            np.arange((k_last + 1) * N)), dtype=float) if N else np.zeros(0)
        ctl = np.asarray(spec.ctilde.sample(np.arange(2 * k_last + 2)), dtype=float)
        a = np.empty(n_max + 1)
        b = np.empty(n_max + 1)
        on_periodic = i < N
        a[on_periodic] = atl[(k[on_periodic] * N + i[on_periodic])]
        b[on_periodic] = btl[(k[on_periodic] * N + i[on_periodic])]
        first = i == N
        second = i == N + 1
        a[first] = ctl[2 * k[first]]
        a[second] = ctl[2 * k[second] + 1]
        b[first] = 0.0
        b[second] = 0.0
        return _check_offdiagonal(a), b

    raise SpecError(f"unknown spec variant {type(spec).__name__!r}")


# ---------------------------------------------------------------------------
# report-only validation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ValidationClause:
    name: str
    value: float
    note: str


@dataclass(frozen=True)
class ValidationReport:
    """Residuals of the defining limits of a spec variant, probed at finite n.

    Every clause is heuristic: a small residual at the probe is evidence,
    not proof, that the corresponding limit holds.  Nothing here rejects.
    """

    variant: str
    probe_n: int
    clauses: tuple

    def __str__(self):
        lines = [f"validation of {self.variant} spec at probe n = {self.probe_n} "
                 "(heuristic, report-only)"]
        for c in self.clauses:
            lines.append(f"  {c.name}: {c.value:.6g}  [{c.note}]")
        return "\n".join(lines)


def _tail(arr: np.ndarray, frac: float = 0.1) -> np.ndarray:
    n = len(arr)
    return arr[max(0, n - max(1, int(n * frac))):]


def validate(spec: JacobiSpec, probe_n: int = 4096) -> ValidationReport:
    """Probe the defining clauses of a spec variant at finite depth."""

    clauses = []
    a, b = build(spec, probe_n)

    if isinstance(spec, ModulatedSpec):
        idx = np.arange(1, probe_n + 1)
        alpha = spec.alpha.sample(idx)
        alpha_prev = spec.alpha.sample(idx - 1)
        beta = spec.beta.sample(idx)
        r1 = np.abs(a[:-1] / a[1:] - alpha_prev / alpha)
        r2 = np.abs(b[1:] / a[1:] - beta / alpha)
        growth = a[probe_n] / max(np.max(a[: probe_n // 2 + 1]), 1e-300)
        clauses += [
            ValidationClause("sup tail |a_{n-1}/a_n - alpha_{n-1}/alpha_n|",
                             float(np.max(_tail(r1))), "should tend to 0"),
            ValidationClause("sup tail |b_n/a_n - beta_n/alpha_n|",
                             float(np.max(_tail(r2))), "should tend to 0"),
            ValidationClause("a_probe / max(a over first half)", float(growth),
                             "should exceed 1 and keep growing (a_n -> inf)"),
        ]
        if spec.s is not None and spec.z is not None:
            s = spec.s.sample(idx)
            z = spec.z.sample(idx)
            rs = np.abs((alpha_prev / alpha) * a[1:] - a[:-1] - s)
            rz = np.abs((beta / alpha) * a[1:] - b[1:] - z)
            clauses += [
                ValidationClause("sup tail |alpha-ratio correction - s_n|",
                                 float(np.max(_tail(rs))), "should tend to 0"),
                ValidationClause("sup tail |beta-ratio correction - z_n|",
                                 float(np.max(_tail(rz))), "should tend to 0"),
            ]

    elif isinstance(spec, KMSpec):
        idx = np.arange(probe_n + 1)
        gam = np.asarray(spec.gamma.sample(idx), dtype=float)
        if spec.atilde is not None:
            atl = np.asarray(spec.atilde.sample(idx), dtype=float)
        else:
            atl = gamma_to_atilde(spec.gamma, spec.kappa, probe_n)
        f = np.asarray(spec.f.sample(idx), dtype=float)
        rate = gam[1:] * (1.0 - atl[:-1] / atl[1:])
        inv_sum_tail = float(np.sum(1.0 / atl[probe_n // 2:]))
        clauses += [
            ValidationClause("sup tail |gamma_n (1 - atilde_{n-1}/atilde_n) - kappa|",
                             float(np.max(np.abs(_tail(rate) - spec.kappa))),
                             "should tend to 0"),
            ValidationClause("sup |f_n| over probe", float(np.max(np.abs(f))),
                             "should stay bounded"),
            ValidationClause("sum of 1/atilde over second half of probe",
                             inv_sum_tail, "should be summable (small tail)"),
            ValidationClause("sup tail |gamma_{n-1}/gamma_n - 1|",
                             float(np.max(np.abs(_tail(gam[:-1] / gam[1:]) - 1.0))),
                             "should tend to 0"),
            ValidationClause("1/gamma at probe", float(1.0 / gam[-1]),
                             "should tend to 0 (gamma_n -> inf)"),
        ]

    elif isinstance(spec, BlendedSpec):
        m_max = probe_n
        ctl = np.asarray(spec.ctilde.sample(np.arange(2 * m_max + 2)), dtype=float)
        atl = np.asarray(spec.atilde_gen().sample(np.arange(m_max + 1)), dtype=float)
        btl = np.asarray(spec.btilde_gen().sample(np.arange(m_max + 1)), dtype=float)
        idx = np.arange(m_max + 1)
        clauses += [
            ValidationClause("1/ctilde at probe", float(1.0 / ctl[-1]),
                             "should tend to 0 (ctilde_n -> inf)"),
            ValidationClause("sup tail |ctilde_{2m+1}/ctilde_{2m} - 1|",
                             float(np.max(np.abs(_tail(ctl[1::2] / ctl[0::2]) - 1.0))),
                             "should tend to 0"),
            ValidationClause("sup tail |atilde_n - alpha_n|",
                             float(np.max(np.abs(_tail(atl - spec.alpha.sample(idx))))),
                             "should tend to 0"),
            ValidationClause("sup tail |btilde_n - beta_n|",
                             float(np.max(np.abs(_tail(btl - spec.beta.sample(idx))))),
                             "should tend to 0"),
        ]

    else:
        growth = a[probe_n] / max(np.max(a[: probe_n // 2 + 1]), 1e-300)
        clauses.append(ValidationClause(
            "a_probe / max(a over first half)", float(growth),
            "growth trend; explicit specs carry no asymptotic contract"))

    return ValidationReport(spec.variant, probe_n, tuple(clauses))


# ---------------------------------------------------------------------------
# JSON interface
# ---------------------------------------------------------------------------

_GEN_KINDS = ("power", "log-power", "exp-sum", "table", "expr", "periodic")


def parse_gen(obj, field: str) -> SequenceGen:
    if not isinstance(obj, dict):
        raise SpecError(f"expected an object describing a generator, got "
                        f"{type(obj).__name__}", field)
    kind = obj.get("kind")
    if kind not in _GEN_KINDS:
        raise SpecError(f"unknown generator kind {kind!r}; expected one of "
                        f"{_GEN_KINDS}", f"{field}.kind")

    def num(key, default=None, required=False):
        v = obj.get(key, default)
        if v is None:
            if required:
                raise SpecError("missing required number", f"{field}.{key}")
            return default
        if not isinstance(v, (int, float)) or isinstance(v, bool):
            raise SpecError(f"expected a number, got {v!r}", f"{field}.{key}")
        return float(v)

    if kind == "power":
        return PowerGen(num("exponent", required=True), num("scale", 1.0))
    if kind == "log-power":
        return LogPowerGen(num("p", 1.0), num("q", 2.0), num("scale", 1.0))
    if kind == "exp-sum":
        if "gamma" not in obj:
            raise SpecError("missing gamma generator", f"{field}.gamma")
        return ExpSumGen(num("kappa", required=True),
                         parse_gen(obj["gamma"], f"{field}.gamma"))
    if kind in ("table", "periodic"):
        key = "values"
        vals = obj.get(key)
        if not isinstance(vals, list) or not vals:
            raise SpecError("expected a non-empty list of numbers", f"{field}.{key}")
        for i, v in enumerate(vals):
            if not isinstance(v, (int, float)) or isinstance(v, bool):
                raise SpecError(f"expected a number, got {v!r}", f"{field}.{key}[{i}]")
        return TableGen(tuple(vals)) if kind == "table" else PeriodicGen(tuple(vals))
    expr = obj.get("expr")
    if not isinstance(expr, str):
        raise SpecError("expected an expression string", f"{field}.expr")
    try:
        return ExprGen(expr)
    except SpecError as exc:
        raise SpecError(str(exc), f"{field}.expr") from exc


def _parse_periodic(obj, field: str, n_expected=None) -> PeriodicSeq:
    if not isinstance(obj, list) or not obj:
        raise SpecError("expected a non-empty list of numbers", field)
    for i, v in enumerate(obj):
        if not isinstance(v, (int, float)) or isinstance(v, bool):
            raise SpecError(f"expected a number, got {v!r}", f"{field}[{i}]")
    if n_expected is not None and len(obj) != n_expected:
        raise SpecError(f"expected {n_expected} values, got {len(obj)}", field)
    return PeriodicSeq(tuple(obj))


def parse_spec(obj) -> JacobiSpec:
    """Build a spec from a decoded JSON object; errors carry field paths."""

    if not isinstance(obj, dict):
        raise SpecError(f"expected a top-level object, got {type(obj).__name__}")
    variant = obj.get("variant")
    if variant not in ("explicit", "modulated", "blended", "km"):
        raise SpecError(f"unknown variant {variant!r}; expected one of "
                        "('explicit', 'modulated', 'blended', 'km')", "variant")

    def need(key):
        if key not in obj:
            raise SpecError("missing required field", key)
        return obj[key]

    if variant == "explicit":
        return ExplicitSpec(parse_gen(need("a"), "a"), parse_gen(need("b"), "b"))

    N = obj.get("N")
    alpha = _parse_periodic(need("alpha"), "alpha", N)
    beta = _parse_periodic(need("beta"), "beta", N)
    if N is not None and (not isinstance(N, int) or isinstance(N, bool) or N < 1):
        raise SpecError(f"expected a positive integer, got {N!r}", "N")

    try:
        if variant == "modulated":
            s = obj.get("s")
            z = obj.get("z")
            return ModulatedSpec(
                alpha, beta, parse_gen(need("a"), "a"), parse_gen(need("b"), "b"),
                s=None if s is None else _parse_periodic(s, "s", alpha.period),
                z=None if z is None else _parse_periodic(z, "z", alpha.period))
        if variant == "blended":
            return BlendedSpec(
                alpha, beta, parse_gen(need("ctilde"), "ctilde"),
                atilde=None if "atilde" not in obj else parse_gen(obj["atilde"], "atilde"),
                btilde=None if "btilde" not in obj else parse_gen(obj["btilde"], "btilde"))
        kappa = need("kappa")
        if not isinstance(kappa, (int, float)) or isinstance(kappa, bool):
            raise SpecError(f"expected a number, got {kappa!r}", "kappa")
        return KMSpec(
            alpha, beta, parse_gen(need("gamma"), "gamma"),
            parse_gen(need("f"), "f"), float(kappa),
            atilde=None if "atilde" not in obj else parse_gen(obj["atilde"], "atilde"))
    except SpecError:
        raise
    except ValueError as exc:
        raise SpecError(str(exc)) from exc


def load_spec(path: str) -> JacobiSpec:
    """Read and parse a JSON spec file.

    Syntax errors are reported with the file path, line and column; semantic
    errors with the dotted field path.
    """

    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise SpecError(f"cannot read {path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise SpecError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: "
            f"{exc.msg}") from exc
    try:
        return parse_spec(obj)
    except SpecError as exc:
        raise SpecError(f"{path}: {exc}") from exc
