"""The coend of the module category of a finite-dimensional ribbon Hopf algebra,
built from its defining universal property by an explicit section algorithm.

The carrier is the dual space with the coadjoint action.  Each structure map is
the unique solution of its defining diagram, computed by factoring through the
surjective dinatural component of the regular module; two exact duality
oracles (the product against the braided coproduct, the coproduct against the
multiplication of the algebra) plus the full braided Hopf axiom suite certify
every convention choice.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .fields import Scalar
from .hopf import (
    HopfAlgebraData, ModuleData, Vector, braiding, coadjoint_module,
    dual_module, invariants, modular_data, module_power, pivot_inverse, qdim,
    regular_module, rotate_last_to_front, tensor_module, twist, trivial_module,
)
from .linalg import (
    LinearMap, TensorShape, UNIT, block_flip, invert, kernel_and_rank,
)
from .reports import CheckReport


class CoendError(ValueError):
    """Raised when a defining diagram is inconsistent or a gate check fails."""


# -- evaluation / coevaluation for modules -------------------------------------------


def ev_left(V: ModuleData) -> LinearMap:
    """V* (x) V -> 1, (phi, v) |-> phi(v)."""
    F = V.algebra.field
    one = F.one()
    d = V.dim
    return LinearMap(F, V.shape * V.shape, UNIT,
                     {(0, a * d + a): one for a in range(d)})


def coev_left(V: ModuleData) -> LinearMap:
    """1 -> V (x) V*, the identity element sum e_j (x) e^j."""
    F = V.algebra.field
    one = F.one()
    d = V.dim
    return LinearMap(F, UNIT, V.shape * V.shape,
                     {(a * d + a, 0): one for a in range(d)})


def coev_right(V: ModuleData) -> LinearMap:
    """1 -> V* (x) V, the pivot-corrected copairing sum e^j (x) g^{-1} e_j."""
    H = V.algebra
    gi = V.rho_of(pivot_inverse(H))
    d = V.dim
    entries = {}
    for j in range(d):
        for r in range(d):
            v = gi.entry(r, j)
            if not v.is_zero():
                entries[(j * d + r, 0)] = v
    return LinearMap(H.field, UNIT, V.shape * V.shape, entries)


def ev_right(V: ModuleData) -> LinearMap:
    """V (x) V* -> 1, (v, phi) |-> phi(g v)."""
    H = V.algebra
    from .hopf import pivot_element
    g = V.rho_of(pivot_element(H))
    d = V.dim
    entries = {}
    for a in range(d):
        for b in range(d):
            v = g.entry(b, a)
            if not v.is_zero():
                entries[(0, a * d + b)] = v
    return LinearMap(H.field, V.shape * V.shape, UNIT, entries)


def dinatural_component(H: HopfAlgebraData, V: ModuleData,
                        carrier: ModuleData | None = None) -> LinearMap:
    """i_V : V* (x) V -> C sending phi (x) v to the matrix coefficient phi((.) v)."""
    carrier = carrier or coadjoint_module(H)
    F = H.field
    d, v = H.dim, V.dim
    entries = {}
    for a in range(v):
        for b in range(v):
            col = a * v + b
            for k in range(d):
                val = V.rho(k).entry(a, b)
                if not val.is_zero():
                    entries[(k, col)] = val
    return LinearMap(F, V.shape * V.shape, carrier.shape, entries)


# -- the universal-property solver -----------------------------------------------------


def coend_section(H: HopfAlgebraData) -> LinearMap:
    """A right inverse of i_H on the regular module: psi |-> psi (x) 1_H."""
    F = H.field
    d = H.dim
    entries = {}
    for k in range(d):
        for b, ub in enumerate(H.u):
            if not ub.is_zero():
                entries[(k * d + b, k)] = ub
    return LinearMap(F, TensorShape([d]), TensorShape([d, d]), entries)


def factor_through_coend(H: HopfAlgebraData, rhs: LinearMap, arity: int,
                         carrier: ModuleData | None = None) -> LinearMap:
    """The unique map phi: C^(x)arity -> D with phi o i_H^(x)arity = rhs.

    rhs must be given on regular-module inputs (H* (x) H)^(x)arity.  The
    returned map is rhs composed with a section of i_H on each input; the
    defining equation is then re-checked exactly, which certifies that rhs
    annihilates the kernel of i_H^(x)arity (independence of the section).
    """
    carrier = carrier or coadjoint_module(H)
    s = coend_section(H)
    section = s
    i_H = dinatural_component(H, regular_module(H), carrier)
    i_pow = i_H
    for _ in range(arity - 1):
        section = section.tensor(s)
        i_pow = i_pow.tensor(i_H)
    phi = rhs.compose(section.reshaped(section.domain, rhs.domain))
    check = phi.compose(i_pow.reshaped(i_pow.domain, phi.domain))
    if check.entries != rhs.reshaped(check.domain, check.codomain).entries:
        raise CoendError(
            f"defining diagram inconsistent at arity {arity}: "
            "the candidate does not annihilate ker(i_H)")
    dom = TensorShape([carrier.dim] * arity)
    return phi.reshaped(dom, phi.codomain)


def _is_intertwiner(T: LinearMap, V: ModuleData, W: ModuleData) -> bool:
    for k in range(V.algebra.dim):
        lhs = T.compose(V.rho(k).reshaped(T.domain, T.domain))
        rhs = W.rho(k).reshaped(T.codomain, T.codomain).compose(T)
        if lhs != rhs:
            return False
    return True


# -- the coend data ---------------------------------------------------------------------


@dataclass
class CoendData:
    algebra: HopfAlgebraData
    carrier: ModuleData
    m: LinearMap                  # C (x) C -> C
    unit: Vector                  # element of C
    Delta: LinearMap              # C -> C (x) C
    counit: LinearMap             # C -> 1
    antipode: LinearMap           # C -> C
    antipode_inv: LinearMap
    pairing: LinearMap            # C (x) C -> 1
    twist_map: LinearMap          # the twist of the carrier
    report: CheckReport
    pairing_nondegenerate: bool = False
    Omega: Vector | None = None          # inverse copairing in C (x) C
    integral: Vector | None = None       # right integral Lambda
    cointegral: Vector | None = None     # left cointegral lambda as a functional
    dim_B: Scalar | None = None
    anomaly_free: bool | None = None
    modular: bool | None = None
    caches: dict = dc_field(default_factory=dict)

    @property
    def field(self):
        return self.algebra.field

    @property
    def dim(self) -> int:
        return self.carrier.dim

    def unit_map(self) -> LinearMap:
        return LinearMap.from_function(self.field, UNIT, self.carrier.shape,
                                       lambda c: enumerate(self.unit))

    def power(self, n: int) -> ModuleData:
        key = ("power", n)
        if key not in self.caches:
            self.caches[key] = module_power(self.carrier, n)
        return self.caches[key]

    def invariant_basis(self, n: int) -> list[Vector]:
        """Basis of Hom(1, C^(x)n) as vectors."""
        key = ("inv", n)
        if key not in self.caches:
            self.caches[key] = invariants(self.power(n))
        return self.caches[key]


def braided_coproduct(H: HopfAlgebraData) -> LinearMap:
    """The coproduct of the braided counterpart of H:
    h |-> sum h_(2) a_i (x) S((b_i)_(1)) h_(1) (b_i)_(2)."""
    F = H.field
    d = H.dim
    out = LinearMap.zero(F, H.shape, H.shape * H.shape)
    flip = block_flip(F, H.shape, H.shape)
    cop = flip.compose(H.Delta)  # h -> h2 (x) h1
    for a, b, coeff in H.r_pairs():
        db = H.sweedler_iterate(b, 2)
        for idx, c2 in enumerate(db):
            if c2.is_zero():
                continue
            p, q = divmod(idx, d)
            left = H.right_multiplication(a)
            right = H.right_multiplication(H.basis_vector(q)).compose(
                H.left_multiplication(H.antipode_vec(H.basis_vector(p))))
            out = out + left.tensor(right).compose(cop).scaled(coeff * c2)
    return out


def build_coend_hopf(H: HopfAlgebraData,
                     simples: list[ModuleData] | None = None) -> CoendData:
    """Construct the coend as a braided Hopf algebra with its canonical pairing.

    Every structure map is solved from its defining diagram; the duality
    oracles and the braided Hopf axiom suite are mandatory gates and raise on
    failure.
    """
    rep = CheckReport(f"coend of {H.name}")
    F = H.field
    d = H.dim
    C = coadjoint_module(H)
    Hreg = regular_module(H)
    Hdual = dual_module(Hreg)
    i_H = dinatural_component(H, Hreg, C)

    # surjectivity of i_H and the section property
    _, rk = kernel_and_rank(i_H)
    rep.check("dinatural component of the regular module is surjective", rk == d)
    s = coend_section(H)
    rep.check("section property i_H o s = id", i_H.compose(s) == LinearMap.identity(F, C.shape))

    # unit: the image of the unit object's component, i.e. the counit functional
    unit = [H.epsilon.entry(0, k) for k in range(d)]

    # multiplication: m(i_X (x) i_Y) = i_{Y(x)X} o (id_{X*} (x) c_{X, Y*(x)Y})
    YY = tensor_module(Hdual, Hreg)
    c_mid = braiding(Hreg, YY)
    XY_star = block_flip(F, Hreg.shape, Hreg.shape)  # X* (x) Y* -> (Y(x)X)* index flip
    YX = tensor_module(Hreg, Hreg)
    i_YX = dinatural_component(H, YX, C)
    eyeH = LinearMap.identity(F, Hreg.shape)
    step = eyeH.tensor(c_mid)  # X* X Y* Y -> X* (Y* Y) X
    regroup = XY_star.tensor(LinearMap.identity(F, Hreg.shape * Hreg.shape))
    m_rhs = i_YX.reshaped(TensorShape([d] * 4), C.shape).compose(
        regroup.reshaped(step.codomain, TensorShape([d] * 4))).compose(step)
    m_C = factor_through_coend(H, m_rhs.reshaped(TensorShape([d] * 4), C.shape), 2, C)

    # comultiplication: Delta o i_X = (i_X (x) i_X)(id (x) coev_X (x) id)
    ins = eyeH.tensor(coev_left(Hreg)).tensor(eyeH)
    d_rhs = i_H.tensor(i_H).compose(
        ins.reshaped(TensorShape([d, d]), TensorShape([d] * 4)))
    Delta_C = factor_through_coend(H, d_rhs, 1, C)
    Delta_C = Delta_C.reshaped(C.shape, C.shape * C.shape)

    # counit: eps o i_X = ev_X
    eps_C = factor_through_coend(H, ev_left(Hreg), 1, C)

    # pairing: omega(i_X (x) i_Y) = (ev_X (x) ev_Y)(id (x) monodromy (x) id)
    mono = braiding(Hdual, Hreg).compose(braiding(Hreg, Hdual))
    w_step = eyeH.tensor(mono).tensor(eyeH)
    w_rhs = ev_left(Hreg).tensor(ev_left(Hreg)).compose(
        w_step.reshaped(TensorShape([d] * 4), TensorShape([d] * 4)))
    omega = factor_through_coend(H, w_rhs, 2, C)

    # duality oracles pin every ordering convention
    db = braided_coproduct(H)
    rep.check("dual of the product is the braided coproduct",
              all(m_C.entry(c, a * d + b) == db.entry(a * d + b, c)
                  for c in range(d) for a in range(d) for b in range(d)))
    rep.check("dual of the coproduct is the multiplication",
              all(Delta_C.entry(a * d + b, c) == H.m.entry(c, a * d + b)
                  for c in range(d) for a in range(d) for b in range(d)))
    rep.check("counit is evaluation at the algebra unit",
              [eps_C.entry(0, k) for k in range(d)] == H.u)

    # antipode: unique convolution inverse of the identity
    S_C = _solve_antipode(F, d, m_C, unit, Delta_C, eps_C)
    S_inv = invert(S_C)
    if S_inv is None:
        raise CoendError("the antipode of the coend is singular")

    theta_C = twist(C)

    data = CoendData(H, C, m_C, unit, Delta_C, eps_C, S_C, S_inv, omega, theta_C, rep)

    # intertwiner checks: every structure map is a morphism of modules
    C2 = module_power(C, 2)
    rep.check("product is equivariant", _is_intertwiner(m_C, C2, C))
    rep.check("coproduct is equivariant", _is_intertwiner(Delta_C, C, C2))
    rep.check("counit is equivariant", _is_intertwiner(eps_C, C, trivial_module(H)))
    rep.check("antipode is equivariant", _is_intertwiner(S_C, C, C))
    rep.check("pairing is equivariant", _is_intertwiner(omega, C2, trivial_module(H)))
    uvec_map = data.unit_map()
    rep.check("unit is invariant", _is_intertwiner(uvec_map, trivial_module(H), C))

    _check_braided_hopf_axioms(data, rep)
    _check_pairing_axioms(data, rep)

    rep.check("antipode squared equals the twist of the carrier",
              S_C.compose(S_C) == theta_C)
    eye = LinearMap.identity(F, C.shape)
    rep.check("pairing is antipode-balanced",
              omega.compose(S_C.tensor(eye)) == omega.compose(eye.tensor(S_C)))

    if not rep.ok:
        raise CoendError(f"coend gates failed: {rep.failures}")

    # non-degeneracy and downstream data
    W = _pairing_matrix(data)
    data.pairing_nondegenerate = invert(W) is not None

    if simples:
        md = modular_data(H, simples)
        data.dim_B = md.dim_B
        data.anomaly_free = md.anomaly_free
        data.modular = md.modular
        data.caches["modular_data"] = md
        data.caches["simples"] = simples

    _solve_integrals(data, rep)
    if data.pairing_nondegenerate:
        _solve_pairing_inverse(data, rep)
    if not rep.ok:
        raise CoendError(f"coend integral/pairing gates failed: {rep.failures}")
    return data


def _solve_antipode(F, d, m_C, unit, Delta_C, eps_C) -> LinearMap:
    """Solve m(S (x) id)Delta = u eps = m(id (x) S)Delta for S by linear algebra."""
    # unknowns S[r][c]; build the two convolution constraints stacked
    shape = TensorShape([d])
    eye = LinearMap.identity(F, shape)
    u_map = LinearMap.from_function(F, UNIT, shape, lambda c: enumerate(unit))
    target = u_map.compose(eps_C)
    rows = {}
    row = 0
    # m o (S (x) id) o Delta at (out, in): sum over a,b: m[out,(r,b)] S[r,a] Delta[(a,b),in]
    for out in range(d):
        for inp in range(d):
            t = target.entry(out, inp)
            coeffs_left: dict[int, Scalar] = {}
            coeffs_right: dict[int, Scalar] = {}
            for (ab, i2), dv in Delta_C.entries.items():
                if i2 != inp:
                    continue
                a, b = divmod(ab, d)
                for (o2, rb), mv in m_C.entries.items():
                    if o2 != out:
                        continue
                    r, bb = divmod(rb, d)
                    if bb == b:
                        key = r * d + a
                        coeffs_left[key] = coeffs_left.get(key, F.zero()) + mv * dv
                    rr, c2 = divmod(rb, d)
                    if rr == a:
                        key = c2 * d + b
                        coeffs_right[key] = coeffs_right.get(key, F.zero()) + mv * dv
            for coeffs in (coeffs_left, coeffs_right):
                for k, v in coeffs.items():
                    if not v.is_zero():
                        rows[(row, k)] = v
                rows[(row, d * d)] = rows.get((row, d * d), F.zero()) - t
                row += 1
    # homogeneous system in (S entries, 1); force the last coordinate to 1
    sys_map = LinearMap(F, TensorShape([d * d + 1]), TensorShape([max(row, 1)]), rows)
    basis, _ = kernel_and_rank(sys_map)
    solutions = [vec for vec in basis if not vec[d * d].is_zero()]
    if len(solutions) != 1 or len(basis) != 1:
        raise CoendError(f"antipode solution space has dimension {len(basis)}")
    vec = solutions[0]
    scale = vec[d * d].inverse()
    entries = {}
    for idx in range(d * d):
        v = vec[idx] * scale
        if not v.is_zero():
            entries[divmod(idx, d)] = v
    return LinearMap(F, shape, shape, entries)


def _check_braided_hopf_axioms(data: CoendData, rep: CheckReport):
    F = data.field
    C = data.carrier
    eye = LinearMap.identity(F, C.shape)
    m, Delta, eps, S = data.m, data.Delta, data.counit, data.antipode
    u_map = data.unit_map()
    c_CC = braiding(C, C)

    rep.check("braided: associativity",
              m.compose(m.tensor(eye)) == m.compose(eye.tensor(m)))
    rep.check("braided: unit", m.compose(u_map.tensor(eye)) == eye
              and m.compose(eye.tensor(u_map)) == eye)
    rep.check("braided: coassociativity",
              Delta.tensor(eye).compose(Delta) == eye.tensor(Delta).compose(Delta))
    rep.check("braided: counit", eps.tensor(eye).compose(Delta) == eye
              and eye.tensor(eps).compose(Delta) == eye)
    mid = eye.tensor(c_CC.reshaped(C.shape * C.shape, C.shape * C.shape)).tensor(eye)
    rep.check("braided: bialgebra compatibility with the braiding",
              Delta.compose(m) == m.tensor(m).compose(mid).compose(Delta.tensor(Delta)))
    rep.check("braided: counit multiplicative", eps.compose(m) == eps.tensor(eps))
    rep.check("braided: unit comultiplicative",
              Delta.compose(u_map) == u_map.tensor(u_map))
    ue = u_map.compose(eps)
    rep.check("braided: antipode axiom",
              m.compose(S.tensor(eye)).compose(Delta) == ue
              and m.compose(eye.tensor(S)).compose(Delta) == ue)


def _check_pairing_axioms(data: CoendData, rep: CheckReport):
    F = data.field
    C = data.carrier
    eye = LinearMap.identity(F, C.shape)
    m, Delta, eps, w = data.m, data.Delta, data.counit, data.pairing
    u_map = data.unit_map()
    eye2 = eye.tensor(eye)
    lhs = w.compose(m.tensor(eye))
    rhs = w.compose(eye.tensor(w).tensor(eye)).compose(eye2.tensor(Delta))
    rep.check("pairing vs product (left)", lhs == rhs)
    lhs = w.compose(eye.tensor(m))
    rhs = w.compose(eye.tensor(w).tensor(eye)).compose(Delta.tensor(eye2))
    rep.check("pairing vs product (right)", lhs == rhs)
    rep.check("pairing vs unit (left)", w.compose(u_map.tensor(eye)) == eps)
    rep.check("pairing vs unit (right)", w.compose(eye.tensor(u_map)) == eps)


def _pairing_matrix(data: CoendData) -> LinearMap:
    d = data.dim
    entries = {}
    for (z, ab), v in data.pairing.entries.items():
        a, b = divmod(ab, d)
        entries[(a, b)] = v
    return LinearMap(data.field, data.carrier.shape, data.carrier.shape, entries)


def _solve_integrals(data: CoendData, rep: CheckReport):
    """Right integral and left cointegral, both invariant, both one-dimensional."""
    F = data.field
    d = data.dim
    C = data.carrier
    m, Delta, eps = data.m, data.Delta, data.counit

    # right integral: m(Lambda (x) c) = eps(c) Lambda for all c, Lambda invariant
    rows = {}
    row = 0
    for c in range(d):
        eps_c = eps.entry(0, c)
        for out in range(d):
            for lam in range(d):
                v = m.entry(out, lam * d + c) - (eps_c if lam == out else F.zero())
                if not v.is_zero():
                    rows[(row, lam)] = rows.get((row, lam), F.zero()) + v
            row += 1
    for k in range(data.algebra.dim):
        rho = C.rho(k)
        eps_k = data.algebra.epsilon.entry(0, k)
        for r in range(d):
            for cc in range(d):
                v = rho.entry(r, cc) - (eps_k if r == cc else F.zero())
                if not v.is_zero():
                    rows[(row, cc)] = rows.get((row, cc), F.zero()) + v
            row += 1
    sys_map = LinearMap(F, C.shape, TensorShape([max(row, 1)]), rows)
    basis, _ = kernel_and_rank(sys_map)
    data.caches["integral_space_dim"] = len(basis)
    if len(basis) != 1:
        if data.pairing_nondegenerate:
            raise CoendError(f"right integral space has dimension {len(basis)} "
                             "despite a nondegenerate pairing")
        return  # no invariant integral (the underlying algebra is not unimodular)
    Lambda = basis[0]

    # left cointegral: (id (x) lam)Delta = u lam, lam an invariant functional
    rows = {}
    row = 0
    for inp in range(d):
        for out in range(d):
            # sum_b Delta[(out,b),inp] lam[b] - unit[out] lam[inp] = 0
            coeffs = {}
            for b in range(d):
                v = Delta.entry(out * d + b, inp)
                if not v.is_zero():
                    coeffs[b] = coeffs.get(b, F.zero()) + v
            coeffs[inp] = coeffs.get(inp, F.zero()) - data.unit[out]
            for b, v in coeffs.items():
                if not v.is_zero():
                    rows[(row, b)] = v
            row += 1
    for k in range(data.algebra.dim):
        rho = C.rho(k)
        eps_k = data.algebra.epsilon.entry(0, k)
        # functional invariance: lam o rho(k) = eps(k) lam
        for cc in range(d):
            coeffs = {}
            for r in range(d):
                v = rho.entry(r, cc)
                if not v.is_zero():
                    coeffs[r] = coeffs.get(r, F.zero()) + v
            coeffs[cc] = coeffs.get(cc, F.zero()) - eps_k
            for b, v in coeffs.items():
                if not v.is_zero():
                    rows[(row, b)] = v
            row += 1
    sys_map = LinearMap(F, C.shape, TensorShape([max(row, 1)]), rows)
    basis, _ = kernel_and_rank(sys_map)
    data.caches["cointegral_space_dim"] = len(basis)
    if len(basis) != 1:
        if data.pairing_nondegenerate:
            raise CoendError(f"left cointegral space has dimension {len(basis)} "
                             "despite a nondegenerate pairing")
        return
    lam = basis[0]

    # normalize: lam(u) = 1, then lam(Lambda) = 1
    lam_u = sum((a * b for a, b in zip(lam, data.unit)), F.zero())
    if lam_u.is_zero():
        raise CoendError("cointegral vanishes on the unit; cannot normalize")
    lam = [x / lam_u for x in lam]
    lam_L = sum((a * b for a, b in zip(lam, Lambda)), F.zero())
    if lam_L.is_zero():
        raise CoendError("cointegral vanishes on the integral; cannot normalize")
    Lambda = [x / lam_L for x in Lambda]
    data.integral = Lambda
    data.cointegral = lam

    lam_L = sum((a * b for a, b in zip(lam, Lambda)), F.zero())
    rep.check("cointegral of integral is 1", lam_L == F.one())
    if data.dim_B is not None:
        eps_L = sum((data.counit.entry(0, k) * Lambda[k] for k in range(d)), F.zero())
        rep.check("counit of integral equals dim(B)", eps_L == data.dim_B)
        # cross-check against the universal integral: Lambda ~ sum qdim(i) chi_i
        simples = data.caches.get("simples")
        if simples:
            univ = [F.zero()] * d
            for V in simples:
                chi = internal_character(data, V)
                q = qdim(V)
                univ = [x + q * y for x, y in zip(univ, chi)]
            scalar = None
            ok = True
            for a, b in zip(univ, Lambda):
                if b.is_zero() != a.is_zero():
                    ok = False
                    break
                if not b.is_zero():
                    ratio = a / b
                    if scalar is None:
                        scalar = ratio
                    elif ratio != scalar:
                        ok = False
                        break
            rep.check("integral is proportional to the universal integral", ok)


def _solve_pairing_inverse(data: CoendData, rep: CheckReport):
    """Omega: the two-sided inverse copairing, from the matrix and from the
    integral formula; both must agree."""
    F = data.field
    d = data.dim
    W = _pairing_matrix(data)
    Winv = invert(W)
    if Winv is None:
        return
    # side conditions pin Omega = W^{-1} read as an element of C (x) C
    Omega = [F.zero()] * (d * d)
    for (a, b), v in Winv.entries.items():
        Omega[a * d + b] = v
    eye = LinearMap.identity(F, data.carrier.shape)
    omega_map = data.pairing

    def contract_left(Om):
        # (omega (x) id)(id (x) Om): c |-> sum omega(c, Om1) Om2
        out = {}
        for ab, v in enumerate(Om):
            if v.is_zero():
                continue
            a, b = divmod(ab, d)
            for c in range(d):
                w = omega_map.entry(0, c * d + a)
                if not w.is_zero():
                    out[(b, c)] = out.get((b, c), F.zero()) + w * v
        return LinearMap(F, data.carrier.shape, data.carrier.shape, out)

    def contract_right(Om):
        # (id (x) omega)(Om (x) id): c |-> sum Om1 omega(Om2, c)
        out = {}
        for ab, v in enumerate(Om):
            if v.is_zero():
                continue
            a, b = divmod(ab, d)
            for c in range(d):
                w = omega_map.entry(0, b * d + c)
                if not w.is_zero():
                    out[(a, c)] = out.get((a, c), F.zero()) + v * w
        return LinearMap(F, data.carrier.shape, data.carrier.shape, out)

    ident = LinearMap.identity(F, data.carrier.shape)
    rep.check("copairing side condition (left)", contract_left(Omega) == ident)
    rep.check("copairing side condition (right)", contract_right(Omega) == ident)
    data.Omega = Omega

    if data.integral is not None:
        wLL = pairing_value(data, data.integral, data.integral)
        if data.dim_B is not None:
            rep.check("pairing of the integral with itself equals dim(B)",
                      wLL == data.dim_B)
        if wLL.is_zero():
            raise CoendError("omega(Lambda, Lambda) = 0 despite nondegeneracy")
        # the integral formula: the inverse copairing is the middle pairing of
        # two coproducts of the integral, Omega = w(L,L)^{-1} (id (x) w (x) id)(DL (x) DL)
        dL = data.Delta.apply(data.integral)
        om_raw = [F.zero()] * (d * d)
        for ab, v1 in enumerate(dL):
            if v1.is_zero():
                continue
            a, b = divmod(ab, d)
            for ef, v2 in enumerate(dL):
                if v2.is_zero():
                    continue
                e, f_ = divmod(ef, d)
                w = omega_map.entry(0, b * d + e)
                if not w.is_zero():
                    om_raw[a * d + f_] = om_raw[a * d + f_] + v1 * v2 * w
        scale = wLL.inverse()
        rep.check("integral formula reproduces the inverse copairing",
                  [scale * v for v in om_raw] == Omega)
        # corollary: the unnormalized composite acts on C as omega(L,L) id
        lhs = contract_right(om_raw)
        rep.check("integral composite equals omega(Lambda,Lambda) id",
                  lhs == ident.scaled(wLL))


def coend_to_json(data: CoendData) -> dict:
    """Named-slot serialization of the structure maps for caching."""
    def lin(m: LinearMap):
        return {"src": m.domain.dim, "tgt": m.codomain.dim,
                "entries": sorted([[r, c, repr(v)] for (r, c), v in m.entries.items()])}

    def vec(v):
        return None if v is None else [[i, repr(x)] for i, x in enumerate(v)
                                       if not x.is_zero()]

    return {
        "schema": 1,
        "field": data.field.to_json(),
        "dim": data.dim,
        "m": lin(data.m), "Delta": lin(data.Delta), "counit": lin(data.counit),
        "antipode": lin(data.antipode), "antipode_inv": lin(data.antipode_inv),
        "pairing": lin(data.pairing), "twist": lin(data.twist_map),
        "unit": vec(data.unit), "Omega": vec(data.Omega),
        "Lambda": vec(data.integral), "cointegral": vec(data.cointegral),
        "pairing_nondegenerate": data.pairing_nondegenerate,
        "dim_B": None if data.dim_B is None else repr(data.dim_B),
        "anomaly_free": data.anomaly_free,
        "modular": data.modular,
    }


def coend_from_json(H: HopfAlgebraData, obj: dict) -> CoendData:
    """Rehydrate a cached coend; gates are not re-run (the cache key covers the
    input file, so the stored maps were verified when first built)."""
    F = H.field
    carrier = coadjoint_module(H)

    def lin(d):
        entries = {(r, c): F.parse(s) for r, c, s in d["entries"]}
        return LinearMap(F, TensorShape([d["src"]]), TensorShape([d["tgt"]]),
                         entries)

    def vec(sparse, size):
        if sparse is None:
            return None
        out = [F.zero()] * size
        for i, s in sparse:
            out[i] = F.parse(s)
        return out

    d = obj["dim"]
    rep = CheckReport(f"coend of {H.name} (cached)")
    data = CoendData(
        H, carrier,
        lin(obj["m"]).reshaped(TensorShape([d, d]), TensorShape([d])),
        vec(obj["unit"], d),
        lin(obj["Delta"]).reshaped(TensorShape([d]), TensorShape([d, d])),
        lin(obj["counit"]).reshaped(TensorShape([d]), UNIT),
        lin(obj["antipode"]), lin(obj["antipode_inv"]),
        lin(obj["pairing"]).reshaped(TensorShape([d, d]), UNIT),
        lin(obj["twist"]), rep,
        pairing_nondegenerate=obj["pairing_nondegenerate"],
        Omega=vec(obj["Omega"], d * d),
        integral=vec(obj["Lambda"], d),
        cointegral=vec(obj["cointegral"], d),
        dim_B=None if obj["dim_B"] is None else F.parse(obj["dim_B"]),
        anomaly_free=obj["anomaly_free"],
        modular=obj["modular"],
    )
    return data


def integrals(data: CoendData) -> tuple[Vector, Vector]:
    """The normalized right integral and left cointegral.

    Raises when either solution space is not one-dimensional, which signals a
    non-unimodular input rather than a bug.
    """
    if data.integral is None or data.cointegral is None:
        i_dim = data.caches.get("integral_space_dim")
        c_dim = data.caches.get("cointegral_space_dim")
        raise CoendError(
            f"integral spaces have dimensions {i_dim}/{c_dim}; a one-dimensional "
            "space of invariant (co)integrals is required")
    return data.integral, data.cointegral


def pairing_inverse(data: CoendData) -> Vector:
    """The inverse copairing, raising when the pairing is degenerate."""
    if data.Omega is None:
        raise CoendError("the pairing is degenerate; no inverse copairing exists")
    return data.Omega


def pairing_value(data: CoendData, x: Vector, y: Vector) -> Scalar:
    F = data.field
    d = data.dim
    out = F.zero()
    for (z, ab), v in data.pairing.entries.items():
        a, b = divmod(ab, d)
        if not x[a].is_zero() and not y[b].is_zero():
            out = out + v * x[a] * y[b]
    return out


# -- internal characters -----------------------------------------------------------------


def internal_character(data: CoendData, V: ModuleData) -> Vector:
    """chi_V = i_V o coev_right(V), the pivot-twisted character of V."""
    i_V = dinatural_component(data.algebra, V, data.carrier)
    vec = coev_right(V).apply([data.field.one()])
    return i_V.apply(vec)


def character_functional(data: CoendData, V: ModuleData) -> Vector:
    """psi_V = omega(chi_V (x) .) as a functional vector on C."""
    chi = internal_character(data, V)
    F = data.field
    d = data.dim
    out = [F.zero()] * d
    for (z, ab), v in data.pairing.entries.items():
        a, b = divmod(ab, d)
        if not chi[a].is_zero():
            out[b] = out[b] + v * chi[a]
    return out


def character_checks(data: CoendData, V: ModuleData) -> CheckReport:
    """The trace-like identities: the coproduct of chi_V is invariant under the
    pinned braided rotation, and psi_V is a rotation-invariant trace on C."""
    rep = CheckReport(f"internal character checks for {V.name}")
    F = data.field
    C = data.carrier
    chi = internal_character(data, V)
    rep.check("character is an invariant vector",
              all(_vec_eq(C.rho(k).apply(chi),
                          [data.algebra.epsilon.entry(0, k) * x for x in chi])
                  for k in range(data.algebra.dim)))
    rot = rotate_last_to_front(C, 1)
    rot = rot.reshaped(TensorShape([data.dim] * 2), TensorShape([data.dim] * 2))
    d_chi = data.Delta.apply(chi)
    rep.check("coproduct of the character is rotation-invariant",
              rot.apply(d_chi) == d_chi)
    psi = character_functional(data, V)
    d = data.dim
    psi_m = [F.zero()] * (d * d)
    for (out, ab), v in data.m.entries.items():
        if not psi[out].is_zero():
            psi_m[ab] = psi_m[ab] + psi[out] * v
    psi_m_map = LinearMap(F, TensorShape([d * d]), UNIT,
                          {(0, ab): v for ab, v in enumerate(psi_m) if not v.is_zero()})
    rot_sq = rot.reshaped(TensorShape([d * d]), TensorShape([d * d]))
    rep.check("character functional is a rotated trace",
              psi_m_map.compose(rot_sq) == psi_m_map)
    return rep


def _vec_eq(a, b):
    return all(x == y for x, y in zip(a, b))


def characters_span_check(data: CoendData) -> CheckReport:
    """For supplied simples: the characters are a basis of Hom(1, C)."""
    rep = CheckReport("internal characters span the invariants")
    simples = data.caches.get("simples")
    if not simples:
        rep.check("simples supplied", False)
        return rep
    inv = data.invariant_basis(1)
    chis = [internal_character(data, V) for V in simples]
    F = data.field
    entries = {}
    for c, chi in enumerate(chis):
        for r, v in enumerate(chi):
            if not v.is_zero():
                entries[(r, c)] = v
    mat = LinearMap(F, TensorShape([len(chis)]), data.carrier.shape, entries)
    _, rk = kernel_and_rank(mat)
    rep.check("characters are linearly independent", rk == len(chis))
    rep.check("characters span Hom(1, C)", rk == len(inv))
    return rep


# -- the end and the Drinfeld map ----------------------------------------------------------


@dataclass
class EndData:
    carrier: ModuleData
    m: LinearMap
    unit: Vector
    Delta: LinearMap
    counit: LinearMap
    antipode: LinearMap
    report: CheckReport


def end_and_drinfeld(data: CoendData) -> tuple[EndData, LinearMap, dict]:
    """The end as the dual of the coend, the Drinfeld map (the left currying of
    the pairing), and the factorizability flags; the three nondegeneracy tests
    must agree."""
    rep = CheckReport(f"end and Drinfeld map for {data.algebra.name}")
    F = data.field
    d = data.dim
    C = data.carrier
    A = dual_module(C, name="end")

    # dual structure maps through the canonical pairing <phi, c> = phi(c):
    # the end multiplies by precomposing the comultiplication, and so on.
    m_A = LinearMap(F, TensorShape([d, d]), TensorShape([d]),
                    {(c, ab): v for (ab, c), v in data.Delta.entries.items()})
    u_A = [data.counit.entry(0, k) for k in range(d)]
    Delta_A = LinearMap(F, TensorShape([d]), TensorShape([d, d]),
                        {(ab, c): v for (c, ab), v in data.m.entries.items()})
    eps_A = LinearMap(F, TensorShape([d]), UNIT,
                      {(0, k): v for k, v in enumerate(data.unit) if not v.is_zero()})
    S_A = data.antipode.transpose()
    end = EndData(A, m_A, u_A, Delta_A, eps_A, S_A, rep)

    rep.check("end multiplication is equivariant",
              _is_intertwiner(m_A, module_power(A, 2), A))
    rep.check("end comultiplication is equivariant",
              _is_intertwiner(Delta_A, A, module_power(A, 2)))
    eyeA = LinearMap.identity(F, A.shape)
    u_A_map = LinearMap.from_function(F, UNIT, A.shape, lambda c: enumerate(u_A))
    rep.check("end associativity",
              m_A.compose(m_A.tensor(eyeA)) == m_A.compose(eyeA.tensor(m_A)))
    rep.check("end unit", m_A.compose(u_A_map.tensor(eyeA)) == eyeA)
    rep.check("end coassociativity",
              Delta_A.tensor(eyeA).compose(Delta_A) == eyeA.tensor(Delta_A).compose(Delta_A))
    c_AA = braiding(A, A)
    mid = eyeA.tensor(c_AA.reshaped(A.shape * A.shape, A.shape * A.shape)).tensor(eyeA)
    rep.check("end bialgebra compatibility",
              Delta_A.compose(m_A) ==
              m_A.tensor(m_A).compose(mid).compose(Delta_A.tensor(Delta_A)))
    ueA = u_A_map.compose(eps_A)
    rep.check("end antipode axiom",
              m_A.compose(S_A.tensor(eyeA)).compose(Delta_A) == ueA
              and m_A.compose(eyeA.tensor(S_A)).compose(Delta_A) == ueA)

    # Drinfeld map: the left currying D(c) = omega(c (x) .)
    Wmat = _pairing_matrix(data)
    D = Wmat  # rows index the dual basis of C, i.e. the end carrier
    rep.check("Drinfeld map is equivariant", _is_intertwiner(D, C, A))
    rep.check("Drinfeld map sends unit to unit", D.apply(data.unit) == u_A)
    rep.check("Drinfeld map respects counits",
              eps_A.compose(D) == data.counit)
    m_C2 = data.m.reshaped(TensorShape([d, d]), TensorShape([d]))
    rep.check("Drinfeld map is an algebra morphism",
              D.compose(m_C2) == m_A.compose(D.tensor(D)))
    rep.check("Drinfeld map is a coalgebra morphism",
              Delta_A.compose(D) ==
              D.tensor(D).compose(data.Delta.reshaped(TensorShape([d]),
                                                      TensorShape([d, d]))))

    _, rk = kernel_and_rank(Wmat)
    flags = {
        "pairing_nondegenerate": rk == d,
        "drinfeld_invertible": invert(D) is not None,
        "inverse_copairing_exists": data.Omega is not None,
    }
    rep.check("factorizability tests agree",
              len(set(flags.values())) == 1)
    return end, D, flags
