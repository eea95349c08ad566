"""Euler data: hypergeometric construction, restriction tables, and the
symbolic verifiers for the gluing, reciprocity, linking and degree-bound
identities, together with the Lagrange map and the mirror-group action
on degree-zero restriction sequences.

Closed-form data is a rule d -> P_d, a polynomial in (kappa, alpha) and
optionally x.  Verifiers consume restriction tables: the values of P_d
at the fixed-point weights kappa = lam_i + r*alpha.  An invertible class
Omega supplies the d = 0 entry, and "bar" on restrictions flips the sign
of alpha only.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import (RationalFunction, SubstitutionError, alpha_degree,
                      bar_involution, rf_equal, weight_ring)
from .bundles import OmegaClass, omega_class
from .qseries import ScalarQSeries


class EulerDataError(ValueError):
    pass


# ---------------------------------------------------------------------
# closed-form data


class EulerDataClosed:
    """A sequence d -> P_d given in closed form, plus its invertible class.

    ``rule(d, ring)`` must return a polynomial in kappa, alpha (and x when
    ``with_x``); ``omega_restriction(i, ring)`` gives the restriction of
    the invertible class at the i-th fixed point.
    """

    def __init__(self, n, rule, omega_restriction, omega=None,
                 splitting=None, with_x=False):
        self.n = n
        self.ring = weight_ring(n)
        self._rule = rule
        self._omega_restriction = omega_restriction
        self.omega = omega
        self.splitting = splitting
        self.with_x = with_x
        self._cache = {}

    def polynomial(self, d):
        if d < 1:
            raise EulerDataError("closed-form data is indexed by d >= 1")
        if d not in self._cache:
            self._cache[d] = self._rule(d, self.ring)
        return self._cache[d]

    def omega_restriction(self, i):
        if not 0 <= i <= self.n:
            raise EulerDataError(f"fixed point index {i} out of range")
        return self._omega_restriction(i, self.ring)


def build_hypergeom_data(st, with_x=False):
    """The hypergeometric Euler data attached to a splitting type.

    P_d is the product of (l*kappa - m*alpha) over m = 0..l*d for each
    convex degree l and of (-k*kappa + m*alpha) over m = 1..k*d-1 for
    each concave degree k; with_x adds the inert x to every linear
    factor.  The trivial bundle gives the constant 1.
    """
    def rule(d, ring):
        kappa = ring.var("kappa")
        alpha = ring.var("alpha")
        x = ring.var("x") if with_x else ring.zero
        p = ring.one
        for l in st.convex:
            for m in range(l * d + 1):
                p = p * (x + l * kappa - m * alpha)
        for k in st.concave:
            for m in range(1, k * d):
                p = p * (x - k * kappa + m * alpha)
        return p

    def omega_restriction(i, ring):
        lam = ring.var(f"lam{i}")
        if with_x:
            x = ring.var("x")
            num = ring.one
            den = ring.one
            for l in st.convex:
                num = num * (x + l * lam)
            for k in st.concave:
                den = den * (x - k * lam)
            return RationalFunction(num, den)
        om = omega_class(st)
        h = om.h_exponent
        if h >= 0:
            return RationalFunction(ring.const(om.scalar) * lam ** h)
        return RationalFunction(ring.const(om.scalar), lam ** (-h))

    return EulerDataClosed(st.n, rule, omega_restriction,
                           omega=None if with_x else omega_class(st),
                           splitting=st, with_x=with_x)


def endpoint_weights_data(n):
    """The data Q_d = kappa*(kappa - d*alpha), whose restrictions are the
    weight products at the two ends of an orbit; its class restricts to
    lam_i^2."""
    def rule(d, ring):
        kappa = ring.var("kappa")
        alpha = ring.var("alpha")
        return kappa * (kappa - d * alpha)

    def omega_restriction(i, ring):
        return RationalFunction(ring.var(f"lam{i}") ** 2)

    return EulerDataClosed(n, rule, omega_restriction,
                           omega=OmegaClass(Fraction(1), 2))


def restrict(ed, d, i, r):
    """Restriction of P_d at the fixed point with weight lam_i + r*alpha."""
    if d < 1 or not 0 <= i <= ed.n or not 0 <= r <= d:
        raise EulerDataError(f"restriction indices out of range: d={d}, i={i}, r={r}")
    ring = ed.ring
    target = ring.var(f"lam{i}") + r * ring.var("alpha")
    return RationalFunction(ed.polynomial(d).substitute({"kappa": target}))


def to_table(ed, d_max):
    """Materialize the full grid of restrictions up to degree d_max."""
    if d_max < 1:
        raise EulerDataError("d_max must be >= 1")
    entries = {}
    for d in range(1, d_max + 1):
        for i in range(ed.n + 1):
            for r in range(d + 1):
                entries[(d, i, r)] = restrict(ed, d, i, r)
    omega = {i: ed.omega_restriction(i) for i in range(ed.n + 1)}
    return EulerDataTable(ed.n, d_max, ed.ring, entries, omega)


# ---------------------------------------------------------------------
# restriction tables


class EulerDataTable:
    """All fixed-point restrictions of a data sequence for d <= d_max.

    entries[(d, i, r)] is the value at the weight lam_i + r*alpha;
    omega_restrictions[i] is the (nonzero) restriction of the class
    standing in degree zero.
    """

    def __init__(self, n, d_max, ring, entries, omega_restrictions):
        self.n = n
        self.d_max = d_max
        self.ring = ring
        self.entries = entries
        self.omega_restrictions = omega_restrictions
        for i in range(n + 1):
            if i not in omega_restrictions or omega_restrictions[i].is_zero():
                raise EulerDataError(f"omega restriction at p_{i} missing or zero")
        for d in range(1, d_max + 1):
            for i in range(n + 1):
                for r in range(d + 1):
                    if (d, i, r) not in entries:
                        raise EulerDataError(f"incomplete table: missing entry {(d, i, r)}")

    def entry(self, d, i, r):
        if d == 0:
            return self.omega_restrictions[i]
        return self.entries[(d, i, r)]

    def restriction_sequence(self):
        """The degree-zero slice d -> entry(d, i, 0), including d = 0."""
        values = {(0, i): self.omega_restrictions[i] for i in range(self.n + 1)}
        for d in range(1, self.d_max + 1):
            for i in range(self.n + 1):
                values[(d, i)] = self.entries[(d, i, 0)]
        return RestrictionSequence(self.n, self.d_max, self.ring, values)

    def map_entries(self, fn):
        entries = {key: fn(key, val) for key, val in self.entries.items()}
        omega = {i: fn((0, i, 0), val) for i, val in self.omega_restrictions.items()}
        return EulerDataTable(self.n, self.d_max, self.ring, entries, omega)


class RestrictionSequence:
    """A sequence B_d given only through its n+1 fixed-point restrictions.

    values[(d, i)] for 0 <= d <= d_max; the d = 0 entry is the invertible
    class and must be nonzero at every fixed point.
    """

    def __init__(self, n, d_max, ring, values):
        self.n = n
        self.d_max = d_max
        self.ring = ring
        self.values = values
        for i in range(n + 1):
            if values[(0, i)].is_zero():
                raise EulerDataError(f"degree-zero restriction at p_{i} is zero")

    def value(self, d, i):
        return self.values[(d, i)]


# ---------------------------------------------------------------------
# verification reports


@dataclass
class CheckResult:
    d: int
    i: int
    r: int
    status: str  # "pass" | "fail" | "inconclusive"
    witness: str = ""

    def to_dict(self):
        return {"d": self.d, "i": self.i, "r": self.r,
                "status": self.status, "witness": self.witness}


@dataclass
class VerificationReport:
    check: str
    n: int
    d_max: int
    results: list = field(default_factory=list)

    @property
    def all_pass(self):
        return all(r.status != "fail" for r in self.results)

    @property
    def failures(self):
        return [r for r in self.results if r.status == "fail"]

    @property
    def inconclusive(self):
        return [r for r in self.results if r.status == "inconclusive"]

    def to_dict(self):
        return {"check": self.check, "n": self.n, "d_max": self.d_max,
                "results": [r.to_dict() for r in self.results],
                "all_pass": self.all_pass}

    def to_json(self, indent=None):
        return json.dumps(self.to_dict(), indent=indent)


def _bar(rf):
    return bar_involution(rf, 0)


# ---------------------------------------------------------------------
# the identities


def check_gluing(tbl):
    """Omega(lam_i) * Q_d(lam_i + r*alpha) = bar(Q_r(lam_i)) * Q_{d-r}(lam_i)
    for every d <= d_max, 0 <= r <= d, 0 <= i <= n, with Q_0 the class."""
    report = VerificationReport("gluing", tbl.n, tbl.d_max)
    for d in range(1, tbl.d_max + 1):
        for i in range(tbl.n + 1):
            omega_i = tbl.omega_restrictions[i]
            for r in range(d + 1):
                lhs = omega_i * tbl.entry(d, i, r)
                rhs = _bar(tbl.entry(r, i, 0)) * tbl.entry(d - r, i, 0)
                if rf_equal(lhs, rhs):
                    report.results.append(CheckResult(d, i, r, "pass"))
                else:
                    report.results.append(CheckResult(
                        d, i, r, "fail", witness=f"lhs={lhs}; rhs={rhs}"))
    return report


def _alpha_binding(ring, j, i, d):
    """The polynomial (lam_j - lam_i)/d used as a special alpha value."""
    return (ring.var(f"lam{j}") - ring.var(f"lam{i}")) * Fraction(1, d)


def check_reciprocity(tbl):
    """The three consequences of gluing, checked independently:

    (i)   Q_d(lam_i + d*alpha) equals bar(Q_d(lam_i));
    (ii)  Q_d(lam_j) at alpha=(lam_j-lam_i)/d equals Q_d(lam_i) at
          alpha=(lam_i-lam_j)/d;
    (iii) Omega(lam_i) Q_d(lam_j) = Q_r(lam_j) Q_{d-r}(lam_i) at
          alpha=(lam_j-lam_i)/r, r = 1..d.

    Substitutions that hit a vanishing denominator are reported as
    inconclusive, not failures.
    """
    report = VerificationReport("reciprocity", tbl.n, tbl.d_max)
    ring = tbl.ring
    for d in range(1, tbl.d_max + 1):
        for i in range(tbl.n + 1):
            lhs = tbl.entry(d, i, d)
            rhs = _bar(tbl.entry(d, i, 0))
            status = "pass" if rf_equal(lhs, rhs) else "fail"
            report.results.append(CheckResult(
                d, i, d, status,
                witness="" if status == "pass" else f"item (i): lhs={lhs}; rhs={rhs}"))
    for d in range(1, tbl.d_max + 1):
        for i in range(tbl.n + 1):
            for j in range(tbl.n + 1):
                if j == i:
                    continue
                try:
                    left = tbl.entry(d, j, 0).substitute(
                        {"alpha": _alpha_binding(ring, j, i, d)})
                    right = tbl.entry(d, i, 0).substitute(
                        {"alpha": _alpha_binding(ring, i, j, d)})
                except SubstitutionError as exc:
                    report.results.append(CheckResult(
                        d, i, j, "inconclusive", witness=f"item (ii): {exc}"))
                    continue
                status = "pass" if rf_equal(left, right) else "fail"
                report.results.append(CheckResult(
                    d, i, j, status,
                    witness="" if status == "pass" else f"item (ii): j={j}"))
    for d in range(1, tbl.d_max + 1):
        for r in range(1, d + 1):
            for i in range(tbl.n + 1):
                for j in range(tbl.n + 1):
                    if j == i:
                        continue
                    binding = {"alpha": _alpha_binding(ring, j, i, r)}
                    try:
                        lhs = (tbl.omega_restrictions[i] * tbl.entry(d, j, 0)).substitute(binding)
                        rhs = (tbl.entry(r, j, 0) * tbl.entry(d - r, i, 0)).substitute(binding)
                    except SubstitutionError as exc:
                        report.results.append(CheckResult(
                            d, i, r, "inconclusive", witness=f"item (iii): j={j}: {exc}"))
                        continue
                    status = "pass" if rf_equal(lhs, rhs) else "fail"
                    report.results.append(CheckResult(
                        d, i, r, status,
                        witness="" if status == "pass" else f"item (iii): j={j}"))
    return report


def check_linked(table_a, table_b):
    """Both degree-zero restrictions agree at alpha = (lam_i - lam_j)/d."""
    if table_a.n != table_b.n or table_a.d_max != table_b.d_max:
        raise EulerDataError("tables are not compatible")
    report = VerificationReport("linking", table_a.n, table_a.d_max)
    ring = table_a.ring
    for d in range(1, table_a.d_max + 1):
        for i in range(table_a.n + 1):
            for j in range(table_a.n + 1):
                if j == i:
                    continue
                diff = table_a.entry(d, i, 0) - table_b.entry(d, i, 0)
                try:
                    value = diff.substitute({"alpha": _alpha_binding(ring, i, j, d)})
                except SubstitutionError as exc:
                    report.results.append(CheckResult(d, i, j, "inconclusive", witness=str(exc)))
                    continue
                status = "pass" if value.is_zero() else "fail"
                report.results.append(CheckResult(
                    d, i, j, status,
                    witness="" if status == "pass" else f"j={j}: residue={value}"))
    return report


def check_degree_bound(table_a, table_b=None):
    """alpha-degree of the degree-zero restriction differences against
    (n+1)d - 2.  table_b = None compares against the zero data."""
    report = VerificationReport("degree-bound", table_a.n, table_a.d_max)
    for d in range(1, table_a.d_max + 1):
        bound = (table_a.n + 1) * d - 2
        for i in range(table_a.n + 1):
            diff = table_a.entry(d, i, 0)
            if table_b is not None:
                diff = diff - table_b.entry(d, i, 0)
            if diff.is_zero():
                report.results.append(CheckResult(d, i, 0, "pass", witness="deg=-inf"))
                continue
            if alpha_degree(diff.den) > 0:
                report.results.append(CheckResult(
                    d, i, 0, "inconclusive",
                    witness=f"denominator involves alpha: {diff.den}"))
                continue
            deg = alpha_degree(diff.num)
            status = "pass" if deg <= bound else "fail"
            report.results.append(CheckResult(
                d, i, 0, status, witness=f"deg={deg} bound={bound}"))
    return report


# ---------------------------------------------------------------------
# the monoid structure


def combine(kind, table_a, table_b=None):
    """Entrywise monoid operations on tables.

    kind: "product" or "quotient" (table_b a table), "scale" (table_b a
    scalar or rational function), "alternate" (no table_b); the classes
    combine accordingly.
    """
    if kind in ("product", "quotient"):
        if not isinstance(table_b, EulerDataTable):
            raise EulerDataError(f"{kind} needs a second table")
        if table_a.n != table_b.n or table_a.d_max != table_b.d_max:
            raise EulerDataError("tables are not compatible")
        entries = {}
        for key, val in table_a.entries.items():
            other = table_b.entries[key]
            if kind == "product":
                entries[key] = val * other
            else:
                if other.is_zero():
                    raise EulerDataError(f"quotient by zero entry at {key}")
                entries[key] = val / other
        omega = {}
        for i, val in table_a.omega_restrictions.items():
            if kind == "product":
                omega[i] = val * table_b.omega_restrictions[i]
            else:
                omega[i] = val / table_b.omega_restrictions[i]
        return EulerDataTable(table_a.n, table_a.d_max, table_a.ring, entries, omega)
    if kind == "scale":
        factor = RationalFunction.promote(table_a.ring, table_b)
        if factor.is_zero():
            raise EulerDataError("scale factor must be nonzero")
        return table_a.map_entries(lambda key, val: val * factor)
    if kind == "alternate":
        return table_a.map_entries(
            lambda key, val: val if key[0] % 2 else -val)
    raise EulerDataError(f"unknown combination kind '{kind}'")


# ---------------------------------------------------------------------
# the Lagrange map and the mirror-group action


def lagrange_map(seq):
    """Rebuild a full table from a degree-zero restriction sequence:
    entry(d, i, r) = Omega(lam_i)^-1 * bar(B_r(lam_i)) * B_{d-r}(lam_i)."""
    entries = {}
    for i in range(seq.n + 1):
        if seq.value(0, i).is_zero():
            raise EulerDataError(f"zero class restriction at p_{i}")
    for d in range(1, seq.d_max + 1):
        for i in range(seq.n + 1):
            omega_inv = RationalFunction(seq.ring.one) / seq.value(0, i)
            for r in range(d + 1):
                entries[(d, i, r)] = (omega_inv * _bar(seq.value(r, i))
                                      * seq.value(d - r, i))
    omega = {i: seq.value(0, i) for i in range(seq.n + 1)}
    return EulerDataTable(seq.n, seq.d_max, seq.ring, entries, omega)


def _exp_rf_series(ring, coeffs, order):
    """exp of a series with rational-function coefficients and zero
    constant term, to the given order."""
    one = RationalFunction(ring.one)
    zero = RationalFunction(ring.zero)
    out = [zero] * (order + 1)
    out[0] = one
    for d in range(1, order + 1):
        acc = zero
        for j in range(1, d + 1):
            if not coeffs[j].is_zero():
                acc = acc + coeffs[j] * out[d - j] * j
        out[d] = acc * Fraction(1, d)
    return out


def _product_factor(ring, n, i, r, d):
    """prod_{j=0..n} prod_{m=r+1..d} (lam_i - lam_j - m*alpha)."""
    lam_i = ring.var(f"lam{i}")
    alpha = ring.var("alpha")
    p = ring.one
    for j in range(n + 1):
        lam_j = ring.var(f"lam{j}")
        for m in range(r + 1, d + 1):
            p = p * (lam_i - lam_j - m * alpha)
    return p


def mirror_transform(seq, multiplier=None, shift=None):
    """Transform a restriction sequence by e^(f/alpha) and t -> t + g.

    ``shift`` (g) is a scalar q-series with rational coefficients and
    zero constant term; ``multiplier`` (f) is a list of coefficients,
    rational functions in (lam, alpha), also with zero constant term.
    The two explicit recursions are applied in order: first the e^(dg)
    redistribution, then the series e^(f/alpha - p*g/alpha) restricted
    at p = lam_i.  Linked values are preserved.
    """
    n, d_max, ring = seq.n, seq.d_max, seq.ring
    if shift is None:
        g = [Fraction(0)] * (d_max + 1)
    elif isinstance(shift, ScalarQSeries):
        g = [Fraction(c) for c in shift.truncate(d_max).coeffs] if shift.order >= d_max else None
        if g is None:
            raise EulerDataError("shift series truncated below d_max")
    else:
        g = [Fraction(c) for c in shift] + [Fraction(0)] * (d_max + 1 - len(shift))
        g = g[: d_max + 1]
    if g[0] != 0:
        raise EulerDataError("shift must have zero constant term")
    g_series = ScalarQSeries(d_max, g)

    if multiplier is None:
        f = [RationalFunction(ring.zero)] * (d_max + 1)
    else:
        f = [RationalFunction.promote(ring, c) for c in multiplier]
        f += [RationalFunction(ring.zero)] * (d_max + 1 - len(f))
        f = f[: d_max + 1]
    if not f[0].is_zero():
        raise EulerDataError("multiplier series must have zero constant term")

    exp_dg = {0: ScalarQSeries.one(d_max)}
    base = g_series.exp()
    for d in range(1, d_max + 1):
        exp_dg[d] = exp_dg[d - 1] * base

    alpha_rf = RationalFunction(ring.var("alpha"))
    values = {(0, i): seq.value(0, i) for i in range(n + 1)}
    factors = {}

    def factor(i, r, d):
        if (i, r, d) not in factors:
            factors[(i, r, d)] = RationalFunction(_product_factor(ring, n, i, r, d))
        return factors[(i, r, d)]

    for i in range(n + 1):
        lam_i = RationalFunction(ring.var(f"lam{i}"))
        # u = exp((f - lam_i * g)/alpha), the combined multiplier at p_i
        combined = [(f[s] - lam_i * g[s]) / alpha_rf for s in range(d_max + 1)]
        u = _exp_rf_series(ring, combined, d_max)
        primed = {0: seq.value(0, i)}
        for d in range(1, d_max + 1):
            acc = seq.value(d, i)
            for r in range(d):
                coeff = exp_dg[r].coeffs[d - r]
                if coeff:
                    acc = acc + coeff * seq.value(r, i) * factor(i, r, d)
            primed[d] = acc
        for d in range(1, d_max + 1):
            acc = primed[d]
            for r in range(d):
                if not u[d - r].is_zero():
                    acc = acc + u[d - r] * primed[r] * factor(i, r, d)
            values[(d, i)] = acc
    return RestrictionSequence(n, d_max, ring, values)
