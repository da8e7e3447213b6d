"""Length-spectrum estimation and inversion for SL(2, C) representations.

The product-length sequence e^{l(a^n) + l(b^n) - l(a^n b^n)} converges to
the modulus of the boundary cross-ratio of the four fixed points; this
module computes the sequence, extrapolates its limit, and inverts a
length oracle back to a representation, unique up to conjugacy and
entrywise complex conjugation.  The same sequence is available for
form-preserving matrix isometries of real and complex hyperbolic space.
"""

from __future__ import annotations

import cmath
import concurrent.futures
import math
import os

import numpy as np

from .ballmodel import crossratio_ball
from .isometry import boundary_fixed_points, translation_length
from .sl2traces import (
    SL2,
    SL2Rep,
    NonLoxodromicError,
    check_word,
    classify,
    is_nonelementary,
    length,
    random_loxodromic,
    random_sl2,
    trace_word,
    word_inverse,
    _expanding_eigenvalue,
    _reduced_words,
)

__all__ = [
    "LengthOracle",
    "FixedPair",
    "fixed_points",
    "lemma1_sequence",
    "lemma1_matrix_sequence",
    "matrix_crossratio_reference",
    "crossratio_estimate",
    "crossratio_of_pair",
    "default_budget_words",
    "reconstruct",
    "reconstruct_report",
    "conjugacy_distance",
    "random_schottky_pair",
]


class OracleMissError(KeyError):
    """A table-backed oracle was asked for a word it does not cover."""

    def __init__(self, word):
        super().__init__("oracle table has no entry for word %r" % (list(word),))
        self.word = list(word)


class LengthOracle:
    """Queryable translation-length function on words.

    Backed either by a representation (lengths computed on demand;
    non-loxodromic words have geometric length 0) or by a stored table.
    Optional additive noise of scale sigma is deterministic per word.
    """

    def __init__(self, rep=None, table=None, noise=0.0, seed=0):
        if (rep is None) == (table is None):
            raise ValueError("provide exactly one of rep or table")
        self._rep = rep
        self._table = None if table is None else {tuple(k): float(v) for k, v in table.items()}
        self._noise = float(noise)
        self._seed = int(seed)

    @property
    def rep(self):
        return self._rep

    @property
    def arity(self):
        if self._rep is not None:
            return self._rep.arity
        return max((max(abs(l) for l in w) for w in self._table if w), default=0)

    def length(self, word):
        word = tuple(int(l) for l in word)
        if self._table is not None:
            if word not in self._table:
                raise OracleMissError(word)
            base = self._table[word]
        else:
            A = self._rep.evaluate(list(word))
            kind = classify(A)
            base = length(A) if kind == "loxodromic" else 0.0
        if self._noise > 0.0:
            mix = np.random.default_rng((self._seed, 1789, abs(hash(word)) % (2**32)))
            base = base + self._noise * mix.standard_normal()
        return max(base, 0.0)

    def __call__(self, word):
        return self.length(word)


class FixedPair:
    """Repelling and attracting fixed points on the Riemann sphere.

    Points are complex numbers or math.inf for the point at infinity.
    """

    __slots__ = ("repelling", "attracting")

    def __init__(self, repelling, attracting):
        if _sphere_distance(repelling, attracting) < 1e-14:
            raise ValueError("fixed points must be distinct")
        object.__setattr__(self, "repelling", repelling)
        object.__setattr__(self, "attracting", attracting)

    def __setattr__(self, name, value):
        raise AttributeError("FixedPair is immutable")

    def swapped(self):
        return FixedPair(self.attracting, self.repelling)

    def __repr__(self):
        return "FixedPair(repelling=%r, attracting=%r)" % (self.repelling, self.attracting)


def _is_inf(z):
    return z == math.inf or (isinstance(z, complex) and (math.isinf(z.real) or math.isinf(z.imag)))

def _to_proj(z):
    if _is_inf(z):
        return np.array([1.0, 0.0], dtype=complex)
    v = np.array([complex(z), 1.0], dtype=complex)
    return v / np.linalg.norm(v)


def _sphere_distance(z, w):
    u, v = _to_proj(z), _to_proj(w)
    return abs(u[0] * v[1] - u[1] * v[0])


def fixed_points(A):
    """Fixed points of a loxodromic element, labeled by dynamics: the
    attracting point is the eigenvector ratio of the expanding
    eigenvalue.  diag(2, 1/2) attracts to infinity and repels from 0."""
    kind = classify(A)
    if kind != "loxodromic":
        raise NonLoxodromicError("element is %s, not loxodromic" % kind, classification=kind)
    m = A.mat
    lam = _expanding_eigenvalue(A)
    att = _eigenvector_ratio(m, lam)
    rep = _eigenvector_ratio(m, 1.0 / lam)
    return FixedPair(rep, att)


def _eigenvector_ratio(m, lam):
    # (m - lam) v = 0; ratio v0/v1 on the sphere
    r1 = (m[0, 0] - lam, m[0, 1])
    r2 = (m[1, 0], m[1, 1] - lam)
    row = r1 if max(abs(r1[0]), abs(r1[1])) >= max(abs(r2[0]), abs(r2[1])) else r2
    a, b = row
    if abs(a) <= 1e-14 * max(1.0, abs(b)):
        return math.inf
    return complex(-b / a)


def complex_crossratio(x1, x2, x3, x4):
    """(x1-x3)(x2-x4) / ((x1-x4)(x2-x3)) on the Riemann sphere.

    A single infinite point appears in one numerator and one denominator
    factor; those cancel.  Two infinite points among the four means a
    coincident pair, which has no cross-ratio."""
    pts = [x1, x2, x3, x4]
    infs = [_is_inf(p) for p in pts]
    if sum(infs) > 1:
        raise ArithmeticError("cross-ratio of a quadruple with coincident infinite points")

    def fac(i, j):
        if infs[i] or infs[j]:
            return None
        return complex(pts[i]) - complex(pts[j])

    num = [v for v in (fac(0, 2), fac(1, 3)) if v is not None]
    den = [v for v in (fac(0, 3), fac(1, 2)) if v is not None]
    n = 1.0 + 0.0j
    for v in num:
        n *= v
    d = 1.0 + 0.0j
    for v in den:
        d *= v
    if d == 0:
        if n == 0:
            raise ArithmeticError("indeterminate cross-ratio (0/0)")
        return math.inf
    return n / d


def crossratio_of_pair(A, B):
    """Modulus-squared cross-ratio of the fixed-point quadruple
    (repelling A, repelling B, attracting A, attracting B); this is the
    limit of the product-length sequence."""
    fa, fb = fixed_points(A), fixed_points(B)
    cr = complex_crossratio(fa.repelling, fb.repelling, fa.attracting, fb.attracting)
    if cr == math.inf:
        return math.inf
    return abs(cr) ** 2


def _power_word(word, n):
    return list(word) * n


def lemma1_sequence(oracle, a, b, N, check=True):
    """The sequence e^{l(a^n) + l(b^n) - l(a^n b^n)} for n = 1..N.

    With check=True a non-loxodromic power raises; check=False lets the
    degenerate cases through (b = a^{-1} gives a divergent sequence)."""
    if N < 1:
        raise ValueError("N must be positive")
    bound = max(abs(l) for l in list(a) + list(b))
    a = check_word(a, bound)
    b = check_word(b, bound)
    seq = []
    rep = oracle.rep
    for n in range(1, N + 1):
        wa, wb = _power_word(a, n), _power_word(b, n)
        wab = wa + wb
        if check and rep is not None:
            for w in (wa, wb, wab):
                kind = classify(rep.evaluate(w))
                if kind != "loxodromic":
                    raise NonLoxodromicError(
                        "power word %r is %s" % (w, kind), word=w, classification=kind
                    )
        la, lb, lab = oracle(wa), oracle(wb), oracle(wab)
        seq.append(math.exp(la + lb - lab))
    return seq


def _matrix_power(A, n):
    out = A
    for _ in range(n - 1):
        out = out @ A
    return out


def lemma1_matrix_sequence(A, B, N):
    """Product-length sequence for two hyperbolic form-preserving
    matrices acting on real or complex hyperbolic space.  Early powers
    whose product is not hyperbolic contribute geometric length 0."""
    from .isometry import NotHyperbolicError

    def safe_length(M):
        try:
            return translation_length(M)
        except NotHyperbolicError:
            return 0.0

    seq = []
    An, Bn = A, B
    for n in range(1, N + 1):
        la = safe_length(An)
        lb = safe_length(Bn)
        lab = safe_length(An @ Bn)
        seq.append(math.exp(la + lb - lab))
        if n < N:
            An = An @ A
            Bn = Bn @ B
    return seq


def matrix_crossratio_reference(A, B):
    """Ball-model cross-ratio of the fixed-point quadruple of two
    hyperbolic matrices; the limit of lemma1_matrix_sequence."""
    att_a, rep_a = boundary_fixed_points(A)
    att_b, rep_b = boundary_fixed_points(B)
    return crossratio_ball(rep_a, rep_b, att_a, att_b)


def crossratio_estimate(seq, window=8):
    """Extrapolated limit of a geometrically converging sequence.

    Fits s_n ~ c + A r^n on the tail and returns (c, confidence) where
    confidence is the RMS relative misfit of the model on the window;
    0 means exact.  A non-convergent tail (|r| >= 1) is flagged by a
    large confidence, never an exception."""
    s = [float(v) for v in seq]
    if len(s) < 4:
        raise ValueError("need at least 4 terms to extrapolate")
    w = s[-min(window, len(s)):]
    d = [w[i + 1] - w[i] for i in range(len(w) - 1)]
    scale = max(abs(v) for v in w)
    if scale == 0.0:
        return 0.0, 0.0
    if all(abs(x) <= 1e-14 * scale for x in d):
        c = w[-1]
        return c, 0.0
    ratios = []
    for i in range(len(d) - 1):
        if abs(d[i]) > 1e-300:
            ratios.append(d[i + 1] / d[i])
    if not ratios:
        return w[-1], 0.0
    r = float(np.median(ratios))
    if abs(r) >= 0.999:
        # not converging on this window; report last term, flag loudly
        spread = (max(w) - min(w)) / scale
        return w[-1], max(1.0, spread)
    c = w[-1] + d[-1] * r / (1.0 - r)
    amp = d[-1] / (r ** (len(w) - 2) * (r - 1.0)) if r != 0 else 0.0
    resid = 0.0
    for i, v in enumerate(w):
        model = c + amp * r ** i
        resid += (v - model) ** 2
    confidence = math.sqrt(resid / len(w)) / scale
    return c, confidence


def _cyclic_inverse_class(word):
    # canonical representative of the word class under cyclic rotation
    # and inversion; lengths are constant on these classes
    w = tuple(word)
    best = None
    for cand in (w, tuple(word_inverse(list(w)))):
        for k in range(len(cand)):
            rot = cand[k:] + cand[:k]
            if best is None or rot < best:
                best = rot
    return best


def default_budget_words(arity=2, max_len=4, power_max=8):
    """Reduced words of length <= max_len, deduplicated up to the
    length-preserving symmetries, plus the product-power family
    a^n b^n used by the cross-ratio estimate."""
    seen = {}
    for w in _reduced_words(arity, max_len):
        key = _cyclic_inverse_class(w)
        if key not in seen:
            seen[key] = list(w)
    words = sorted(seen.values(), key=lambda w: (len(w), w))
    if arity >= 2:
        for n in range(1, power_max + 1):
            w = [1] * n + [2] * n
            key = _cyclic_inverse_class(w)
            if key not in seen:
                seen[key] = w
                words.append(w)
    return words


def _rep_from_params(p):
    # gauge: a diagonal with fixed points (repelling 0, attracting inf),
    # b with attracting point 1, repelling point z; eigenvalues from
    # half length-angle exponents
    la, ta, lb, tb, zr, zi = [float(v) for v in p]
    z = complex(zr, zi)
    if abs(z - 1.0) < 1e-10:
        return None
    lam = cmath.exp((la + 1j * ta) / 2.0)
    mu = cmath.exp((lb + 1j * tb) / 2.0)
    a = np.diag([lam, 1.0 / lam])
    # columns are the attracting (1) and repelling (z) eigenvectors
    s = np.array([[1.0, z], [1.0, 1.0]], dtype=complex)
    si = np.array([[1.0, -z], [-1.0, 1.0]], dtype=complex) / (1.0 - z)
    b = s @ np.diag([mu, 1.0 / mu]) @ si
    return SL2Rep([SL2(a, check=False), SL2(b, check=False)])


def _word_length_smooth(rep, word):
    # 2 log of the expanding eigenvalue modulus; equals the translation
    # length for loxodromics and extends smoothly elsewhere
    A = rep.evaluate(word)
    return 2.0 * math.log(max(abs(_expanding_eigenvalue(A)), 1.0))


def _residual_vector(params, words, targets):
    rep = _rep_from_params(params)
    if rep is None:
        return np.full(len(words), 1e6)
    out = np.zeros(len(words))
    for i, w in enumerate(words):
        out[i] = _word_length_smooth(rep, w) - targets[i]
    return out


def _levenberg_marquardt(fun, x0, max_iter=160, gtol=1e-12, xtol=1e-14):
    x = np.asarray(x0, dtype=float).copy()
    F = fun(x)
    cost = 0.5 * float(F @ F)
    lam = 1e-3
    n = len(x)
    for _ in range(max_iter):
        J = np.zeros((len(F), n))
        for j in range(n):
            h = 1e-6 * max(1.0, abs(x[j]))
            xp = x.copy(); xp[j] += h
            xm = x.copy(); xm[j] -= h
            J[:, j] = (fun(xp) - fun(xm)) / (2.0 * h)
        g = J.T @ F
        if float(np.abs(g).max()) < gtol:
            break
        H = J.T @ J
        stepped = False
        for _ in range(24):
            try:
                dx = np.linalg.solve(H + lam * np.diag(np.maximum(np.diag(H), 1e-12)), -g)
            except np.linalg.LinAlgError:
                lam *= 4.0
                continue
            if float(np.abs(dx).max()) < xtol * (1.0 + float(np.abs(x).max())):
                return x, cost
            xt = x + dx
            Ft = fun(xt)
            cost_t = 0.5 * float(Ft @ Ft)
            predicted = -float(g @ dx) - 0.5 * float(dx @ (H @ dx))
            gain = (cost - cost_t) / predicted if predicted > 0 else -1.0
            if cost_t < cost:
                x, F, cost = xt, Ft, cost_t
                lam = max(lam * max(1.0 / 3.0, 1.0 - (2.0 * gain - 1.0) ** 3), 1e-12)
                stepped = True
                break
            lam *= 4.0
        if not stepped:
            break
    return x, cost


def _initial_guesses(oracle):
    la = oracle((1,))
    lb = oracle((2,))
    # circle intersection from the two cross-ratio limits:
    # |1 - z| = sqrt(L1) and |z| = sqrt(L1 / L2)
    r1 = None
    r0 = None
    try:
        s1 = lemma1_sequence(oracle, [1], [2], 16, check=False)
        L1, c1 = crossratio_estimate(s1)
        if L1 > 0 and c1 < 0.5:
            r1 = math.sqrt(L1)
    except (OracleMissError, NonLoxodromicError, ValueError, OverflowError):
        pass
    try:
        s2 = lemma1_sequence(oracle, [1], [-2], 16, check=False)
        L2, c2 = crossratio_estimate(s2)
        if L2 > 0 and r1 is not None and c2 < 0.5:
            r0 = math.sqrt((r1 * r1) / L2)
    except (OracleMissError, NonLoxodromicError, ValueError, OverflowError):
        pass
    if r1 is None:
        r1 = 1.0
    if r0 is None:
        r0 = max(r1 - 1.0, 1.0 + 1e-3) if r1 > 2.0 else 1.0 + r1 / 2.0
    xre = (r0 * r0 + 1.0 - r1 * r1) / 2.0
    im2 = r0 * r0 - xre * xre
    xim = math.sqrt(im2) if im2 > 0 else 0.0
    # lengths carry no phase information per word, so the angles need a
    # full independent grid of restarts to reach the right basin
    angles = (0.0, math.pi / 2.0, math.pi, -math.pi / 2.0)
    starts = []
    for sign in (1.0, -1.0):
        for ta in angles:
            for tb in angles:
                starts.append(np.array([la, ta, lb, tb, xre, sign * xim]))
    return starts


def reconstruct_report(oracle, arity=2, budget=30, holdout=6):
    """Invert a length oracle: fit a two-generator representation whose
    translation lengths match the oracle on a word budget.

    Returns a dict with the fitted rep, parameters, per-word residuals,
    the RMS residual, and held-out errors.  Raises ValueError for an
    elementary oracle, RuntimeError when no restart converges."""
    if arity != 2:
        raise ValueError("reconstruction is supported for arity 2 (got %d)" % arity)
    if oracle.rep is not None and not is_nonelementary(oracle.rep):
        raise ValueError("oracle is generated by an elementary representation")

    words = default_budget_words(2)
    if len(words) > budget:
        # keep the power family; trim the longest plain words first
        powers = [w for w in words if _is_power_word(w)]
        plain = [w for w in words if not _is_power_word(w)]
        keep = budget - len(powers)
        if keep < 4:
            keep = 4
        words = plain[:keep] + powers
    fit_words = words
    hold_words = []
    if holdout > 0:
        candidates = [w for w in default_budget_words(2, max_len=5, power_max=0) if w not in words]
        hold_words = candidates[-holdout:] if len(candidates) >= holdout else candidates

    targets = []
    usable = []
    for w in fit_words:
        try:
            targets.append(oracle(w))
            usable.append(w)
        except OracleMissError:
            continue
    if len(usable) < 8:
        raise ValueError("oracle covers only %d of the budget words" % len(usable))
    fit_words = usable
    targets = np.asarray(targets)

    if max(targets) <= 1e-12:
        raise ValueError("oracle lengths all vanish; elementary or trivial source")

    starts = _initial_guesses(oracle)

    def solve_one(x0):
        return _levenberg_marquardt(
            lambda p: _residual_vector(p, fit_words, targets), x0
        )

    max_workers = max(1, int(os.environ.get("RANK1KIT_THREADS", "1") or 1))
    results = []
    if max_workers > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=max_workers) as pool:
            results = list(pool.map(solve_one, starts))
    else:
        results = [solve_one(x0) for x0 in starts]

    best_idx = min(range(len(results)), key=lambda i: results[i][1])
    best_x, best_cost = results[best_idx]
    rms = math.sqrt(2.0 * best_cost / len(fit_words))
    rep = _rep_from_params(best_x)
    if rep is None or rms > 1e-2 * max(1.0, float(np.abs(targets).max())):
        raise RuntimeError(
            "reconstruction did not converge: best residual RMS %.3e over %d words"
            % (rms, len(fit_words))
        )

    holdout_errors = {}
    for w in hold_words:
        try:
            holdout_errors[tuple(w)] = abs(_word_length_smooth(rep, w) - oracle(w))
        except OracleMissError:
            continue

    residuals = _residual_vector(best_x, fit_words, targets)
    return {
        "rep": rep,
        "parameters": [float(v) for v in best_x],
        "words": [list(w) for w in fit_words],
        "residuals": [float(r) for r in residuals],
        "rms": rms,
        "restart_index": best_idx,
        "holdout_errors": {" ".join(str(l) for l in k): float(v) for k, v in holdout_errors.items()},
    }


def _is_power_word(w):
    n = len(w) // 2
    return len(w) >= 2 and len(w) % 2 == 0 and w == [1] * n + [2] * n


def reconstruct(oracle, arity=2, budget=30):
    """The fitted representation only; see reconstruct_report."""
    return reconstruct_report(oracle, arity, budget)["rep"]


def _coordinate_word_list(arity):
    words = []
    for i in range(1, arity + 1):
        words.append([i])
    for i in range(1, arity + 1):
        for j in range(i + 1, arity + 1):
            words.append([i, j])
    for i in range(1, arity + 1):
        for j in range(i + 1, arity + 1):
            for k in range(j + 1, arity + 1):
                words.append([i, j, k])
                words.append([j, i, k])
    return words


def _coordinate_traces(rep):
    return np.array([trace_word(rep, w) for w in _coordinate_word_list(rep.arity)])


def conjugacy_distance(r1, r2):
    """Max deviation of the trace coordinates, minimized over the moves
    that every translation length is blind to: entrywise conjugation of
    r2 and sign flips of individual generators (a sign flip changes the
    matrix but not its projective action, so lengths cannot see it)."""
    if r1.arity != r2.arity:
        raise ValueError("representations have different arities")
    words = _coordinate_word_list(r1.arity)
    c1 = _coordinate_traces(r1)
    best = math.inf
    for cand in (r2, r2.entrywise_conj()):
        c2 = _coordinate_traces(cand)
        for mask in range(1 << r1.arity):
            # generator i flipped iff bit i-1 is set; a word's trace picks
            # up one factor of -1 per flipped letter occurrence
            scale = np.array([
                -1.0 if sum((mask >> (abs(l) - 1)) & 1 for l in w) % 2 else 1.0
                for w in words])
            best = min(best, float(np.abs(c1 - scale * c2).max()))
    return best


def _sl2_from_fixed_points(rep_pt, att_pt, lam):
    s = np.array([[att_pt, rep_pt], [1.0, 1.0]], dtype=complex)
    det = att_pt - rep_pt
    si = np.array([[1.0, -rep_pt], [-1.0, att_pt]], dtype=complex) / det
    return SL2(s @ np.diag([lam, 1.0 / lam]) @ si, check=False)


def random_schottky_pair(rng, length_range=(0.8, 2.2), separation=0.6):
    """Two loxodromic generators with well-separated fixed points on the
    sphere; free and nonelementary with overwhelming margin."""
    while True:
        pts = []
        for _ in range(64):
            z = complex(rng.standard_normal(), rng.standard_normal())
            if rng.uniform() < 0.15:
                z = 1.0 / z if z != 0 else complex(2.0, 0.0)
            if all(_sphere_distance(z, q) > separation for q in pts):
                pts.append(z)
            if len(pts) == 4:
                break
        if len(pts) < 4:
            continue
        la = rng.uniform(*length_range)
        lb = rng.uniform(*length_range)
        ta = rng.uniform(-math.pi, math.pi)
        tb = rng.uniform(-math.pi, math.pi)
        A = _sl2_from_fixed_points(pts[0], pts[1], cmath.exp((la + 1j * ta) / 2.0))
        B = _sl2_from_fixed_points(pts[2], pts[3], cmath.exp((lb + 1j * tb) / 2.0))
        rep = SL2Rep([A, B])
        if not is_nonelementary(rep):
            continue
        ok = True
        for w in ([1, 2], [1, -2], [1, 1, 2], [1, 2, 2]):
            if classify(rep.evaluate(w)) != "loxodromic":
                ok = False
                break
        if ok:
            return rep
