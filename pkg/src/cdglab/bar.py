"""Truncated curved bar constructions with module coefficients.

Letters are the non-unit basis labels of A, each placed in A[1] (degree
|a| − 1).  A word ``(a1 | ... | al) ⊗ m`` has degree Σ(|ai| − 1) + |m|.

Sign conventions (Koszul rule, ε_i = Σ_{k ≤ i} (|a_k| − 1)):

* curvature  ``b0``: insert c at position i with sign (−1)^{ε_i};
* differential ``b1(sa) = −s(da)``, applied at letter i with (−1)^{ε_{i−1}};
* product ``b2(sa, sb) = (−1)^{|sa|} s(ab)`` at letters i, i+1 with (−1)^{ε_{i−1}};
* on the module: ``d_M`` with (−1)^{ε_l}, and the last letter acting on m as
  ``(−1)^{|sa|} a·m`` with (−1)^{ε_{l−1}}.

Words are kept up to length L and degree T; components leaving that box are
dropped.  On interior words (length ≤ L − 1, degree ≤ T − 2) the square of
the codifferential is computed exactly, and must vanish.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Callable, Mapping, Sequence

from .algebras import CdgAlgebra
from .errors import PreconditionViolation, UsageError
from .modules import CdgModule
from .scalars import Matrix


def _sign(n: int) -> int:
    return -1 if n % 2 else 1


@dataclass(frozen=True)
class BarWord:
    letters: tuple
    m: tuple  # (degree, index) of a basis vector of the module

    @property
    def length(self) -> int:
        return len(self.letters)

    def __str__(self):
        inner = " | ".join(self.letters)
        return f"({inner}) ⊗ m{self.m[0]}_{self.m[1]}"


def _letters(A: CdgAlgebra, max_degree: int) -> list[str]:
    out = []
    for d in range(0, max_degree + 1):
        out.extend(l for l in A.basis(d) if l != A.unit)
    return out


def _check_reduced(A: CdgAlgebra, letters: Sequence[str]):
    unit = A.unit
    for a in letters:
        if unit in A.diff(a):
            raise PreconditionViolation(f"d({a}) has a unit component: reduced letters are not closed")
        for b in letters:
            if unit in A.mul(a, b):
                raise PreconditionViolation(f"{a}·{b} has a unit component: reduced letters are not closed")
    if unit in A.curvature:
        raise PreconditionViolation("the curvature has a unit component")


class TruncatedBarModule:
    def __init__(self, A: CdgAlgebra, M: CdgModule, L: int, max_degree: int):
        if A.grading.is_z2:
            raise UsageError("bar constructions here are Z-graded")
        if M.algebra is not A and M.algebra.descriptor() != A.descriptor():
            raise UsageError("module is over a different algebra")
        if any(A.basis(d) for d in range(-6, 0)):
            raise UsageError("bar constructions need a non-negatively graded algebra")
        rng = M.space.support_range()
        if rng is None:
            raise UsageError("zero module")
        self.A, self.M, self.L, self.T = A, M, L, max_degree
        self.field = A.field
        self.mbasis = [(d, k) for d in M.space.degrees() for k in range(M.space.dim(d))]
        self.letters = _letters(A, max_degree - rng[0] + L)
        _check_reduced(A, self.letters)
        self.sdeg = {a: A.degree(a) - 1 for a in self.letters}
        words = []
        for ell in range(L + 1):
            for lets in itertools.product(self.letters, repeat=ell):
                base = sum(self.sdeg[a] for a in lets)
                for m in self.mbasis:
                    if base + m[0] <= max_degree:
                        words.append(BarWord(tuple(lets), m))
        self.words = words
        self.index = {w: k for k, w in enumerate(words)}
        self.D = self._build()

    # -- bookkeeping
    def degree(self, w: BarWord) -> int:
        return sum(self.sdeg[a] for a in w.letters) + w.m[0]

    def is_interior(self, w: BarWord) -> bool:
        return w.length <= self.L - 1 and self.degree(w) <= self.T - 2

    def interior(self) -> list[int]:
        return [k for k, w in enumerate(self.words) if self.is_interior(w)]

    def filtration(self, n: int) -> list[int]:
        """Indices of words of length ≤ n."""
        return [k for k, w in enumerate(self.words) if w.length <= n]

    def _prefix_degrees(self, lets) -> list[int]:
        eps = [0]
        for a in lets:
            eps.append(eps[-1] + self.sdeg[a])
        return eps

    # -- the codifferential
    def apply(self, w: BarWord) -> dict:
        """D(w) as {BarWord: coefficient}, before truncation."""
        A, M, F = self.A, self.M, self.field
        out = {}

        def put(word, v):
            if v:
                s = out.get(word, 0) + v
                if s:
                    out[word] = s
                else:
                    out.pop(word, None)

        lets = w.letters
        eps = self._prefix_degrees(lets)
        ell = len(lets)
        c = A.curvature
        for i in range(ell + 1):
            for x, v in c.items():
                put(BarWord(lets[:i] + (x,) + lets[i:], w.m), _sign(eps[i]) * v)
        for i in range(ell):
            for x, v in A.diff(lets[i]).items():
                put(BarWord(lets[:i] + (x,) + lets[i + 1:], w.m), -_sign(eps[i]) * v)
        for i in range(ell - 1):
            s = _sign(eps[i]) * _sign(self.sdeg[lets[i]])
            for x, v in A.mul(lets[i], lets[i + 1]).items():
                put(BarWord(lets[:i] + (x,) + lets[i + 2:], w.m), s * v)
        md, mk = w.m
        col = M.d.block(md).column(mk)
        for r, v in enumerate(col):
            put(BarWord(lets, (md + 1, r)), _sign(eps[ell]) * v)
        if ell:
            a = lets[-1]
            act = M.act_label(a).block(md).column(mk)
            s = _sign(eps[ell - 1]) * _sign(self.sdeg[a])
            for r, v in enumerate(act):
                put(BarWord(lets[:-1], (md + A.degree(a), r)), s * v)
        return out

    def _build(self) -> Matrix:
        e = {}
        for k, w in enumerate(self.words):
            for w2, v in self.apply(w).items():
                r = self.index.get(w2)
                if r is not None:
                    e[(r, k)] = v
        n = len(self.words)
        return Matrix(n, n, self.field, e)

    def d_squared_interior(self) -> Matrix:
        D = self.D
        cols = self.interior()
        return (D @ D).submatrix(list(range(D.rows)), cols)

    def summary(self) -> dict:
        return {"L": self.L, "max_degree": self.T, "words": len(self.words),
                "interior": len(self.interior()), "letters": list(self.letters)}


def build_bar(A: CdgAlgebra, M: CdgModule, L: int, max_degree: int | None = None) -> TruncatedBarModule:
    """Truncated B(A) ⊗ M; raises if D² fails to vanish on interior words."""
    if max_degree is None:
        max_degree = 2 * L + (M.space.support_range() or (0, 0))[1] + 2
    B = TruncatedBarModule(A, M, L, max_degree)
    sq = B.d_squared_interior()
    if not sq.is_zero():
        (r, c), v = next(iter(sq.items()))
        cols = B.interior()
        raise AssertionError(f"D² ≠ 0 on interior word {B.words[cols[c]]}: "
                             f"coefficient {v} at {B.words[r]}")
    return B


# ---------------------------------------------------------------------------
# comodule endomorphisms and the filtration


Psi0 = Callable[[tuple, tuple], Mapping]


def comodule_endomorphism(B: TruncatedBarModule, psi0: Psi0, degree: int = 0) -> Matrix:
    """ψ = (1 ⊗ ψ0)(Δ ⊗ 1) as a matrix on the word basis.

    ``psi0(letters, m)`` returns {module basis vector: coefficient}; it must
    vanish on words of length 0.
    """
    F = B.field
    for m in B.mbasis:
        if any(F(v) for v in psi0((), m).values()):
            raise PreconditionViolation(f"ψ0(1 ⊗ m) ≠ 0 for m = {m}", m)
    e = {}
    for k, w in enumerate(B.words):
        eps = B._prefix_degrees(w.letters)
        for j in range(w.length):
            sgn = _sign(degree * eps[j])
            for m2, v in psi0(w.letters[j:], w.m).items():
                v = F(v)
                if not v:
                    continue
                r = B.index.get(BarWord(w.letters[:j], m2))
                if r is not None:
                    e[(r, k)] = e.get((r, k), 0) + sgn * v
    n = len(B.words)
    return Matrix(n, n, F, e)


@dataclass
class DecayReport:
    lowers_filtration: bool
    nilpotent: bool
    failures: list = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.lowers_filtration and self.nilpotent


def filtration_decay_check(B: TruncatedBarModule, Psi: Matrix) -> DecayReport:
    """ψ(F_n) ⊆ F_{n−1} and ψ^{n+1}(F_n) = 0 for n = 0..L."""
    fails = []
    lowers, nil = True, True
    n_words = len(B.words)
    for n in range(B.L + 1):
        Fn = B.filtration(n)
        below = set(B.filtration(n - 1)) if n >= 1 else set()
        for (r, c), v in Psi.items():
            if c in Fn and r not in below:
                lowers = False
                fails.append(f"ψ(F_{n}) ⊄ F_{n - 1}: {B.words[c]} -> {B.words[r]}")
                break
        P = Matrix.identity(n_words, B.field)
        for _ in range(n + 1):
            P = Psi @ P
        if not P.submatrix(list(range(n_words)), Fn).is_zero():
            nil = False
            fails.append(f"ψ^{n + 1}(F_{n}) ≠ 0")
    return DecayReport(lowers, nil, fails)


@dataclass
class NilpotentInverse:
    inverse: Matrix
    verified: bool


def nilpotent_inverse(B: TruncatedBarModule, Psi: Matrix) -> NilpotentInverse:
    """Σ_{j ≤ L} ψ^j, checked to invert 1 − ψ on F_{L−1}."""
    n = len(B.words)
    F = B.field
    I = Matrix.identity(n, F)
    S, P = I, I
    for _ in range(B.L):
        P = Psi @ P
        S = S + P
    cols = B.filtration(B.L - 1)
    lhs = ((I - Psi) @ S).submatrix(list(range(n)), cols)
    ok = lhs == I.submatrix(list(range(n)), cols)
    return NilpotentInverse(S, ok)


def bar_contraction_check(B: TruncatedBarModule, hbar: Psi0) -> list:
    """Failures of D H + H D = 1 on words of length ≤ L − 1 and degree ≤ T − 1.

    ``hbar(letters, m)`` gives the components of H on suspended letters; H
    is extended as a comodule map of degree −1 with Koszul signs.
    """
    H = comodule_endomorphism_deg(B, hbar, -1)
    D = B.D
    n = len(B.words)
    cols = [k for k, w in enumerate(B.words) if w.length <= B.L - 1 and B.degree(w) <= B.T - 1]
    S = ((D @ H) + (H @ D)).submatrix(list(range(n)), cols)
    I = Matrix.identity(n, B.field).submatrix(list(range(n)), cols)
    diff = S - I
    return [(B.words[cols[c]], B.words[r], v) for (r, c), v in diff.items()]


def comodule_endomorphism_deg(B: TruncatedBarModule, psi0: Psi0, degree: int) -> Matrix:
    """Like :func:`comodule_endomorphism` but allowing components on length 0."""
    F = B.field
    e = {}
    for k, w in enumerate(B.words):
        eps = B._prefix_degrees(w.letters)
        for j in range(w.length + 1):
            sgn = _sign(degree * eps[j])
            for m2, v in psi0(w.letters[j:], w.m).items():
                v = F(v)
                if not v:
                    continue
                r = B.index.get(BarWord(w.letters[:j], m2))
                if r is not None:
                    e[(r, k)] = e.get((r, k), 0) + sgn * v
    n = len(B.words)
    return Matrix(n, n, F, e)


# ---------------------------------------------------------------------------
# the A∞ contraction identity


@dataclass
class AinfHomotopyComponents:
    """Components h_r on (a_1, ..., a_{r−1}, m), r in ``arities``; zero elsewhere.

    ``funcs[r](letters, m)`` returns {module basis vector: coefficient}.  The
    unsuspended degree of h_r is −r.
    """

    funcs: dict

    @property
    def arities(self) -> list[int]:
        return sorted(self.funcs)

    def __call__(self, r: int, letters: tuple, m: tuple) -> dict:
        f = self.funcs.get(r)
        if f is None:
            return {}
        return dict(f(letters, m))


def lemma_h2(A: CdgAlgebra, sign: int = 1) -> AinfHomotopyComponents:
    """h_2(c^n ⊗ m) = sign·m when n = 1, and 0 otherwise."""
    c = A.curvature
    if len(c) != 1:
        raise UsageError("the curvature must be a single basis label")
    (clab, cv), = c.items()

    def h2(letters, m):
        if len(letters) == 1 and letters[0] == clab:
            return {m: sign}
        return {}

    return AinfHomotopyComponents({2: h2})


@dataclass
class ArityVerdict:
    p: int
    ok: bool
    checked: int
    witness: dict | None = None


@dataclass
class AinfReport:
    convention: str
    verdicts: list

    @property
    def ok(self) -> bool:
        return all(v.ok for v in self.verdicts)

    def first_failure(self) -> ArityVerdict | None:
        return next((v for v in self.verdicts if not v.ok), None)

    def to_json(self) -> dict:
        return {"convention": self.convention, "ok": self.ok,
                "arities": {str(v.p): {"ok": v.ok, "checked": v.checked, "witness": v.witness}
                            for v in self.verdicts}}


CONVENTIONS = ("strict", "shifted")


def _add_into(out: dict, vec: Mapping, s):
    for k, v in vec.items():
        x = out.get(k, 0) + s * v
        if x:
            out[k] = x
        else:
            out.pop(k, None)


def ainf_contraction_check(A: CdgAlgebra, M: CdgModule, h: AinfHomotopyComponents, p_max: int,
                           convention: str = "shifted", max_letter_degree: int = 8) -> AinfReport:
    """Evaluate the contraction identity on every input (a_1, ..., a_{p−1}, m), p ≤ p_max.

    The right-hand side is
        Σ_{r+s=p} (−1)^s m^M_{1+s}(1^{⊗s} ⊗ h_r)
      + Σ_{j+k+l=p} (−1)^{jk+l} h_{j+1+l}(1^{⊗j} ⊗ m_k ⊗ 1^{⊗l}),
    where l counts the trailing inputs including m, so m_k is an operation of
    A when l ≥ 1 and of M when l = 0.  Operations act with the Koszul sign of
    the inputs they jump over (m_k has degree 2 − k, h_r degree −r).

    The left-hand side is the identity on arity 1 under ``"shifted"`` and on
    arity 0 (so never, for p ≥ 1) under ``"strict"``.
    """
    if convention not in CONVENTIONS:
        raise UsageError(f"convention must be one of {CONVENTIONS}")
    F = A.field
    letters = _letters(A, max_letter_degree)
    _check_reduced(A, letters)
    mbasis = [(d, k) for d in M.space.degrees() for k in range(M.space.dim(d))]
    unit = A.unit

    def m_alg(k, ins):
        if k == 0:
            return dict(A.curvature)
        if k == 1:
            return A.diff(ins[0])
        if k == 2:
            return A.mul(ins[0], ins[1])
        return {}

    def m_mod(k, ins, m):
        md, mk = m
        if k == 1:
            col = M.d.block(md).column(mk)
            return {(md + 1, r): v for r, v in enumerate(col) if v}
        if k == 2:
            a = ins[0]
            col = M.act_label(a).block(md).column(mk)
            return {(md + A.degree(a), r): v for r, v in enumerate(col) if v}
        return {}

    def h_vec(r, ins, vec):
        out = {}
        for m, v in vec.items():
            _add_into(out, h(r, tuple(ins), m), v)
        return out

    def rhs(ins: tuple, m: tuple) -> dict:
        p = len(ins) + 1
        out = {}
        degs = [A.degree(a) for a in ins]
        for s in range(0, p):
            r = p - s
            hv = h(r, ins[s:], m)
            if not hv:
                continue
            sg = _sign(s) * _sign(r * sum(degs[:s]))
            for m2, v in hv.items():
                _add_into(out, m_mod(1 + s, ins[:s], m2), sg * v)
        for j in range(0, p + 1):
            for k in range(0, p - j + 1):
                l = p - j - k
                sg = _sign(j * k + l) * _sign((2 - k) * sum(degs[:j]))
                r = j + 1 + l
                if l >= 1:
                    if j + k > len(ins):
                        continue
                    prod = m_alg(k, ins[j:j + k])
                    for x, v in prod.items():
                        if x == unit:
                            continue
                        new = ins[:j] + (x,) + ins[j + k:]
                        _add_into(out, h(r, new, m), sg * v)
                else:
                    if k < 1:
                        continue
                    mv = m_mod(k, ins[j:], m)
                    _add_into(out, h_vec(r, ins[:j], mv), sg)
        return out

    verdicts = []
    for p in range(1, p_max + 1):
        checked, witness = 0, None
        for ins in itertools.product(letters, repeat=p - 1):
            for m in mbasis:
                checked += 1
                lhs = {m: F.one} if (convention == "shifted" and p == 1) else {}
                got = rhs(ins, m)
                if {k: F(v) for k, v in got.items()} != lhs:
                    witness = {"letters": list(ins), "m": list(m),
                               "lhs": {str(k): F.format(v) for k, v in lhs.items()},
                               "rhs": {str(k): F.format(F(v)) for k, v in got.items()}}
                    break
            if witness:
                break
        verdicts.append(ArityVerdict(p, witness is None, checked, witness))
    return AinfReport(convention, verdicts)


def conventions_passing(A: CdgAlgebra, M: CdgModule, h: AinfHomotopyComponents, p_max: int) -> list[str]:
    return [c for c in CONVENTIONS if ainf_contraction_check(A, M, h, p_max, c).ok]


def module_identity_check(A: CdgAlgebra, M: CdgModule, p_max: int, max_letter_degree: int = 8) -> AinfReport:
    """Evaluate Σ_{j+k+l=p} (−1)^{jk+l} m^M_{j+1+l}(1^{⊗j} ⊗ m_k ⊗ 1^{⊗l}) = 0.

    Same operations and Koszul signs as :func:`ainf_contraction_check`, with
    h replaced by the module operations.  Passing confirms that ``m_0 = c``
    together with these signs encodes the law d_M² = c·m.
    """
    ops = AinfHomotopyComponents({r: (lambda r: lambda lets, m: _mod_op(M, A, r, lets, m))(r) for r in (1, 2)})
    return _second_sum_check(A, M, ops, p_max, max_letter_degree)


def _mod_op(M: CdgModule, A: CdgAlgebra, k: int, lets: tuple, m: tuple) -> dict:
    md, mk = m
    if k == 1 and not lets:
        col = M.d.block(md).column(mk)
        return {(md + 1, r): v for r, v in enumerate(col) if v}
    if k == 2 and len(lets) == 1:
        a = lets[0]
        col = M.act_label(a).block(md).column(mk)
        return {(md + A.degree(a), r): v for r, v in enumerate(col) if v}
    return {}


def _second_sum_check(A, M, h, p_max, max_letter_degree):
    F = A.field
    letters = _letters(A, max_letter_degree)
    mbasis = [(d, k) for d in M.space.degrees() for k in range(M.space.dim(d))]
    unit = A.unit

    def m_alg(k, ins):
        if k == 0:
            return dict(A.curvature)
        if k == 1:
            return A.diff(ins[0])
        if k == 2:
            return A.mul(ins[0], ins[1])
        return {}

    def total(ins, m):
        p = len(ins) + 1
        out = {}
        degs = [A.degree(a) for a in ins]
        for j in range(0, p + 1):
            for k in range(0, p - j + 1):
                l = p - j - k
                sg = _sign(j * k + l) * _sign((2 - k) * sum(degs[:j]))
                r = j + 1 + l
                if l >= 1:
                    if j + k > len(ins):
                        continue
                    for x, v in m_alg(k, ins[j:j + k]).items():
                        if x != unit:
                            _add_into(out, h(r, ins[:j] + (x,) + ins[j + k:], m), sg * v)
                elif k >= 1:
                    for m2, v in _mod_op(M, A, k, ins[j:], m).items():
                        _add_into(out, h(r, ins[:j], m2), sg * v)
        return out

    verdicts = []
    for p in range(1, p_max + 1):
        checked, witness = 0, None
        for ins in itertools.product(letters, repeat=p - 1):
            for m in mbasis:
                checked += 1
                got = {k: F(v) for k, v in total(ins, m).items() if F(v)}
                if got:
                    witness = {"letters": list(ins), "m": list(m),
                               "rhs": {str(k): F.format(v) for k, v in got.items()}}
                    break
            if witness:
                break
        verdicts.append(ArityVerdict(p, witness is None, checked, witness))
    return AinfReport("module-identity", verdicts)
