"""
Concrete progenerator functors Hom(P, -) and the transport checks.

P is either a free power R^n or eR for a full idempotent e.  The
endomorphism ring S = End(P) is materialized as a FiniteAlgebra whose
multiplication order is fixed so that precomposition is a right
S-action under the row-vector convention; the certified isomorphisms
onto the matrix algebra (for R^n) and the corner algebra (for eR) are
the regression tests for that choice.

Transported modules carry the hom-matrix basis, so submodules, homs and
witnesses can be pushed through the functor and re-evaluated natively
on the image side.  Verdict agreement is checked, not assumed.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from . import linalg
from .algebra import (
    CornerAlgebra,
    FiniteAlgebra,
    IdealBasis,
    corner_algebra,
    full_idempotent_span_dim,
    is_full_idempotent,
    matrix_algebra,
)
from .conditions import (
    Decomposition,
    WitnessRecord,
    c4star_class_key,
    check_extended,
    def_c4,
    def_c4star,
    evaluate_witness,
    is_c4,
    is_c4star,
    is_semiweak_cs,
    is_strongly_c4star,
    obs_swcs,
    obstruction_index,
    DEFAULT_RULE_ID,
)
from .guards import Guards, DEFAULT_GUARDS, TheoremViolation
from .modules import (
    ModuleHom,
    RightModule,
    Submodule,
    all_submodules,
    fingerprint,
    hom_space_matrices,
    is_essential,
    is_semisimple,
    is_summand,
    regular_module,
    radical_submodule,
)


# ---------------------------------------------------------------------------
# progenerators
# ---------------------------------------------------------------------------

@dataclass
class Progenerator:
    """A certified finitely generated projective generator."""

    ring: FiniteAlgebra
    module: RightModule          # P in its own coordinates
    kind: str                    # "free-power" or "corner"
    detail: dict
    certificates: dict

    def name(self) -> str:
        if self.kind == "free-power":
            return f"{self.ring.name}^{self.detail['n']}"
        return f"e*{self.ring.name}"


def _generator_certificate(ring: FiniteAlgebra, p_mod: RightModule) -> bool:
    """Trace check: images of Hom(P, R_R) must span the regular module."""
    reg = regular_module(ring)
    homs = hom_space_matrices(p_mod, reg)
    if homs.shape[0] == 0:
        return p_mod.dim == 0 and ring.dim == 0
    stacked = homs.reshape(-1, ring.dim)
    return linalg.rank(stacked, ring.p) == ring.dim


def free_progenerator(ring: FiniteAlgebra, n: int) -> Progenerator:
    """P = R^n with the identity split embedding as projectivity proof."""
    if n < 1:
        raise ValueError("free power must have rank >= 1")
    reg = regular_module(ring)
    d = ring.dim
    action = np.zeros((d, n * d, n * d), dtype=np.int64)
    for block in range(n):
        action[:, block * d:(block + 1) * d, block * d:(block + 1) * d] = reg.action
    p_mod = RightModule(ring, action, name=f"{ring.name}^{n}")
    certs = {
        "generator": _generator_certificate(ring, p_mod),
        "projective_split": ("identity", n),
    }
    if not certs["generator"]:
        raise ValueError("free power failed the generator certificate")
    return Progenerator(ring, p_mod, "free-power", {"n": n}, certs)


def corner_progenerator(ring: FiniteAlgebra, e_coords) -> Progenerator:
    """P = eR for a full idempotent e, with retraction v -> e*v."""
    e = ring.element(e_coords)
    if not e.is_idempotent():
        raise ValueError("corner progenerator requires an idempotent")
    if not is_full_idempotent(ring, e):
        deficiency = full_idempotent_span_dim(ring, e)
        raise ValueError(
            f"idempotent is not full: span AeA has dimension {deficiency} "
            f"< {ring.dim}")
    reg = regular_module(ring)
    rows = ring.left_mult_matrix(e.coords)       # rows e * b_j
    sub = Submodule(reg, rows)
    p_mod = sub.as_module()
    # split embedding P -> R_R with retraction v -> e*v
    incl = sub.basis
    retr = linalg.express_rows(ring.left_mult_matrix(e.coords), sub.basis, ring.p)
    if retr is None or not np.array_equal(incl @ retr % ring.p, linalg.eye(sub.dim)):
        raise ValueError("corner retraction failed; e is not idempotent?")
    certs = {
        "generator": _generator_certificate(ring, p_mod),
        "projective_split": ("left-multiplication-retraction", 1),
    }
    if not certs["generator"]:
        raise ValueError("corner module failed the generator certificate")
    prog = Progenerator(ring, p_mod, "corner",
                        {"e": np.array(e.coords), "submodule": sub}, certs)
    return prog


# ---------------------------------------------------------------------------
# endomorphism algebra
# ---------------------------------------------------------------------------

@dataclass
class EndData:
    """End(P) as an algebra, with the hom-matrix basis and certificates."""

    algebra: FiniteAlgebra
    hom_mats: np.ndarray               # (k, q, q), row convention
    certified_iso: dict | None         # target algebra + basis bridge


def _compose_coords(hom_mats, flat_basis, p):
    """Structure constants for product(s, t) = (x -> s(t(x)))."""
    k = hom_mats.shape[0]
    sc = np.zeros((k, k, k), dtype=np.int64)
    for i in range(k):
        prods = np.einsum("jab,bc->jac", hom_mats, hom_mats[i]) % p
        coeffs = linalg.express_rows(prods.reshape(k, -1), flat_basis, p)
        if coeffs is None:
            raise ValueError("endomorphism space not closed under composition")
        sc[i] = coeffs
    return sc


def end_algebra(p_mod: RightModule, projective: bool = False,
                name: str | None = None) -> EndData:
    """End(P) with composition ordered for right precomposition actions.

    The product of s and t is the map x -> s(t(x)); in row-matrix form
    mat(s*t) = mat(t) @ mat(s).  For projective P the radical is
    attached as {f : im f <= rad P}.
    """
    if "end_data" in p_mod._cache:
        return p_mod._cache["end_data"]
    p = p_mod.p
    homs = hom_space_matrices(p_mod, p_mod)
    k = homs.shape[0]
    flat = homs.reshape(k, -1)
    sc = _compose_coords(homs, flat, p)
    one = linalg.express_rows(linalg.eye(p_mod.dim).reshape(1, -1), flat, p)
    if one is None:
        raise ValueError("identity endomorphism missing from hom basis")
    rad = None
    if projective:
        rad_p = radical_submodule(p_mod)
        cols = rad_p.membership_cols()
        rows = np.array([(h @ cols % p).reshape(-1) for h in homs]).reshape(k, -1)
        rad = linalg.left_nullspace(rows, p)
    alg = FiniteAlgebra(p, k, tuple(f"s{i}" for i in range(k)), sc, one[0],
                        name=name or f"End({p_mod.name})", known_radical=rad)
    if rad is not None:
        ideal = IdealBasis(alg, alg._known_radical)
        if not ideal.is_two_sided():
            raise ValueError("attached End-radical is not a two-sided ideal")
        ideal.nilpotency_index()
    data = EndData(alg, homs, None)
    p_mod._cache["end_data"] = data
    return data


def _certify_bridge(end_data: EndData, target: FiniteAlgebra, phi_mats, p):
    """Verify t -> phi_mats[t] is an algebra isomorphism onto End(P)."""
    homs = end_data.hom_mats
    k = homs.shape[0]
    flat = homs.reshape(k, -1)
    coords = linalg.express_rows(
        np.array(phi_mats).reshape(target.dim, -1), flat, p)
    if coords is None or target.dim != k or linalg.rank(coords, p) != k:
        raise TheoremViolation("endomorphism bridge is not bijective")
    # multiplicativity: coords is an algebra map for the composition order
    left = np.einsum("ua,vb,abk->uvk", coords, coords, end_data.algebra.sc) % p
    right = np.einsum("uvw,wk->uvk", target.sc, coords) % p
    if not np.array_equal(left, right):
        raise TheoremViolation("endomorphism bridge is not multiplicative")
    return {"target": target, "coords": coords}


def certified_matrix_iso(ring: FiniteAlgebra, n: int, prog: Progenerator) -> dict:
    """End(R^n) ~ M_n(R), realized by left matrix multiplication."""
    end_data = end_algebra(prog.module, projective=True)
    target = matrix_algebra(ring, n)
    d = ring.dim
    phi = []
    for i in range(n):
        for j in range(n):
            for t in range(d):
                mat = np.zeros((n * d, n * d), dtype=np.int64)
                mat[j * d:(j + 1) * d, i * d:(i + 1) * d] = \
                    ring.left_mult_matrix(linalg.eye(d)[t])
                phi.append(mat)
    bridge = _certify_bridge(end_data, target, phi, ring.p)
    end_data.certified_iso = bridge
    return bridge


def certified_corner_iso(ring: FiniteAlgebra, prog: Progenerator) -> dict:
    """End(eR) ~ eRe, realized by left multiplication by corner elements."""
    end_data = end_algebra(prog.module, projective=True)
    e = prog.detail["e"]
    sub: Submodule = prog.detail["submodule"]
    corner: CornerAlgebra = corner_algebra(ring, ring.element(e))
    phi = []
    for row in corner.embedding:
        lm = ring.left_mult_matrix(row)
        mat = linalg.express_rows(sub.basis @ lm % ring.p, sub.basis, ring.p)
        if mat is None:
            raise TheoremViolation("corner left multiplication leaves eR")
        phi.append(mat)
    bridge = _certify_bridge(end_data, corner.algebra, phi, ring.p)
    end_data.certified_iso = bridge
    return bridge


# ---------------------------------------------------------------------------
# the functor
# ---------------------------------------------------------------------------

@dataclass
class TransportedModule:
    """Hom(P, M) as a right End(P)-module, with transport helpers."""

    prog: Progenerator
    source: RightModule
    image: RightModule
    hom_mats: np.ndarray       # (t, dim P, dim M)

    def hom_of_coords(self, coords) -> np.ndarray:
        return np.einsum("k,kab->ab", linalg.as_gf(coords, self.image.p),
                         self.hom_mats) % self.image.p


def apply_functor(prog: Progenerator, m: RightModule) -> TransportedModule:
    """Hom(P, M) with right S-action by precomposition."""
    if m.ring is not prog.ring:
        raise ValueError("module is not over the progenerator's ring")
    key = ("transported", id(m))
    cached = prog.module._cache.get(key)
    if cached is not None and cached[0] is m:
        return cached[1]
    p = prog.ring.p
    end_data = end_algebra(prog.module, projective=True)
    s_alg = end_data.algebra
    mats = hom_space_matrices(prog.module, m)
    t = mats.shape[0]
    flat = mats.reshape(t, -1)
    action = np.zeros((s_alg.dim, t, t), dtype=np.int64)
    for j in range(s_alg.dim):
        precomposed = np.einsum("ab,tbm->tam", end_data.hom_mats[j], mats) % p
        coeffs = linalg.express_rows(precomposed.reshape(t, -1), flat, p) \
            if t else linalg.zeros(0, 0)
        if coeffs is None:
            raise ValueError("hom space not closed under precomposition")
        action[j] = coeffs
    image = RightModule(s_alg, action, name=f"F({m.name})")
    result = TransportedModule(prog, m, image, mats)
    prog.module._cache[key] = (m, result)
    return result


def transport_submodule(tr: TransportedModule, n: Submodule) -> Submodule:
    """F(N) = {phi : im phi <= N} as a submodule of the image module."""
    if n.parent is not tr.source:
        raise ValueError("submodule does not live in the functor source")
    p = tr.image.p
    t = tr.hom_mats.shape[0]
    if t == 0:
        return tr.image.zero_submodule()
    cols = n.membership_cols()
    rows = np.array([(h @ cols % p).reshape(-1) for h in tr.hom_mats]).reshape(t, -1)
    coords = linalg.left_nullspace(rows, p)
    return Submodule(tr.image, coords, check=False)


def transport_hom(tr_src: TransportedModule, tr_tgt: TransportedModule,
                  f: ModuleHom) -> ModuleHom:
    """F(f): postcomposition phi -> f o phi."""
    if f.source is not tr_src.source or f.target is not tr_tgt.source:
        raise ValueError("hom endpoints do not match the transported modules")
    p = tr_src.image.p
    t = tr_src.hom_mats.shape[0]
    target_flat = tr_tgt.hom_mats.reshape(tr_tgt.hom_mats.shape[0], -1)
    pushed = np.einsum("tab,bc->tac", tr_src.hom_mats, f.matrix) % p
    coords = linalg.express_rows(pushed.reshape(t, -1), target_flat, p)
    if coords is None:
        raise ValueError("postcomposition left the target hom space")
    return ModuleHom(tr_src.image, tr_tgt.image, coords)


def transport_endo(tr: TransportedModule, f: ModuleHom) -> ModuleHom:
    return transport_hom(tr, tr, f)


def transport_witness(tr: TransportedModule, w: WitnessRecord) -> WitnessRecord:
    """Push a test datum through the functor and re-evaluate it natively.

    Raises TheoremViolation if the recomputed verdict disagrees with the
    source verdict.
    """
    if w.decomposition.parent is not tr.source:
        raise ValueError("witness does not live on the functor source")
    p = tr.image.p
    a_t = transport_submodule(tr, w.decomposition.a)
    b_t = transport_submodule(tr, w.decomposition.b)
    idem_t = transport_endo(tr, w.decomposition.idempotent)
    dec_t = Decomposition(tr.image, a_t, b_t, idem_t)

    a_abs_t = a_t.as_module()
    b_abs_t = b_t.as_module()
    src_a = w.decomposition.a
    src_b = w.decomposition.b
    rows = []
    for coords in a_t.basis:
        phi = tr.hom_of_coords(coords)
        inside = linalg.express_rows(phi, src_a.basis, p)
        if inside is None:
            raise TheoremViolation("transported summand leaked outside A")
        pushed = inside @ w.f.matrix % p @ src_b.basis % p
        flat = tr.hom_mats.reshape(tr.hom_mats.shape[0], -1)
        image_coords = linalg.express_rows(pushed.reshape(1, -1), flat, p)
        if image_coords is None:
            raise TheoremViolation("pushed witness left the hom space")
        abs_coords = b_t.from_parent(image_coords)
        if abs_coords is None:
            raise TheoremViolation("pushed witness left the transported B")
        rows.append(abs_coords[0])
    mat = np.array(rows, dtype=np.int64).reshape(a_t.dim, b_t.dim)
    f_t = ModuleHom(a_abs_t, b_abs_t, mat)
    rec = evaluate_witness(tr.image, dec_t, f_t, w.rule_id)
    if rec.verdict != w.verdict:
        raise TheoremViolation(
            f"witness verdict changed under transport: {w.verdict} -> {rec.verdict}")
    return rec


# ---------------------------------------------------------------------------
# comparison reports
# ---------------------------------------------------------------------------

def build_progenerator(ring: FiniteAlgebra, realization) -> Progenerator:
    """realization = ("matrix", n) or ("corner", e_coords).

    Cached per ring so repeated checks share the certified endomorphism
    algebra and every transported module.
    """
    kind = realization[0]
    if kind == "matrix":
        key = ("progenerator", "matrix", int(realization[1]))
        if key not in ring._cache:
            prog = free_progenerator(ring, int(realization[1]))
            certified_matrix_iso(ring, int(realization[1]), prog)
            ring._cache[key] = prog
        return ring._cache[key]
    if kind == "corner":
        e = linalg.as_gf(realization[1], ring.p)
        key = ("progenerator", "corner", e.tobytes())
        if key not in ring._cache:
            prog = corner_progenerator(ring, e)
            certified_corner_iso(ring, prog)
            ring._cache[key] = prog
        return ring._cache[key]
    raise ValueError(f"unknown realization {realization!r}")


def _serialize_value(v):
    if isinstance(v, float) and v == float("inf"):
        return "infinity"
    return v


CONDITION_NAMES = ("C4", "C4star", "swCS", "strong", "iota")


def evaluate_condition(m: RightModule, condition, rule_id: str, guards: Guards):
    if condition == "C4":
        return is_c4(m, rule_id, guards)
    if condition == "C4star":
        return is_c4star(m, rule_id, guards)
    if condition == "swCS":
        return is_semiweak_cs(m, "submodule", guards)
    if condition == "strong":
        return is_strongly_c4star(m, rule_id, guards)
    if condition == "iota":
        return obstruction_index(m, "submodule", guards)
    if isinstance(condition, tuple) and condition[0] == "ext":
        _, arity, depth, strict = condition
        return check_extended(m, arity, depth, strict, rule_id, guards)
    raise ValueError(f"unknown condition {condition!r}")


def condition_label(condition) -> str:
    if isinstance(condition, tuple):
        _, arity, depth, strict = condition
        return f"ext:{arity}:{depth}:{'strict' if strict else 'nonstrict'}"
    return condition


def morita_pair_check(ring: FiniteAlgebra, realization, m: RightModule,
                      conditions=CONDITION_NAMES,
                      rule_id: str = DEFAULT_RULE_ID,
                      guards: Guards = DEFAULT_GUARDS) -> dict:
    """Evaluate each condition on M and on Hom(P, M); report agreement."""
    if m.ring is not ring:
        raise ValueError("module is not over the given ring")
    prog = build_progenerator(ring, realization)
    tr = apply_functor(prog, m)
    rows = []
    violations = 0
    for condition in conditions:
        val_m = evaluate_condition(m, condition, rule_id, guards)
        val_f = evaluate_condition(tr.image, condition, rule_id, guards)
        agree = val_m == val_f
        if not agree:
            violations += 1
        rows.append({
            "condition": condition_label(condition),
            "value_on_M": _serialize_value(val_m),
            "value_on_FM": _serialize_value(val_f),
            "agreement": agree,
        })
    return {
        "ring": ring.name,
        "module": m.name,
        "progenerator": prog.name(),
        "rows": rows,
        "violations": violations,
    }


def _transported_witness_key(tr: TransportedModule, w: WitnessRecord) -> tuple:
    dims = []
    for sub in (w.decomposition.a, w.decomposition.b, w.kernel, w.image):
        dims.append(transport_submodule(tr, sub).dim)
    im_t = transport_submodule(tr, w.image)
    return (dims[0], dims[1], dims[2], dims[3], fingerprint(im_t.as_module()))


def defect_bijection_check(prog: Progenerator, m: RightModule,
                           rule_id: str = DEFAULT_RULE_ID,
                           guards: Guards = DEFAULT_GUARDS) -> dict:
    """Compare the three defect classes of M and F(M).

    Emptiness must match exactly; shape-class multisets must correspond
    under the dimension map induced by the functor (computed by actually
    transporting each witness's carriers); the obstruction index must be
    equal on both sides.
    """
    tr = apply_functor(prog, m)
    fm = tr.image

    src_c4 = def_c4(m, rule_id, guards)
    dst_c4 = def_c4(fm, rule_id, guards)
    src_c4star = def_c4star(m, rule_id, guards)
    dst_c4star = def_c4star(fm, rule_id, guards)
    src_obs = obs_swcs(m, "submodule", guards)
    dst_obs = obs_swcs(fm, "submodule", guards)

    report = {
        "ring": prog.ring.name,
        "module": m.name,
        "progenerator": prog.name(),
        "emptiness": {
            "def_c4": (not src_c4) == (not dst_c4),
            "def_c4star": (not src_c4star) == (not dst_c4star),
            "obs_swcs": (not src_obs) == (not dst_obs),
        },
    }

    mapped_c4 = Counter(_transported_witness_key(tr, w) for w in src_c4)
    native_c4 = Counter(w.shape_key() for w in dst_c4)
    report["multiset_def_c4"] = mapped_c4 == native_c4

    mapped_star: Counter = Counter()
    for sub, rec in src_c4star:
        tr_sub = apply_functor(prog, sub.as_module())
        mapped_star[(fingerprint(tr_sub.image),
                     _transported_witness_key(tr_sub, rec))] += 1
    native_star = Counter(c4star_class_key(sub, rec) for sub, rec in dst_c4star)
    report["multiset_def_c4star"] = mapped_star == native_star

    mapped_obs: Counter = Counter()
    for pair in src_obs:
        fx = fingerprint(apply_functor(prog, pair.x.as_module()).image)
        fy = fingerprint(apply_functor(prog, pair.y.as_module()).image)
        mapped_obs[(pair.lengths, min(fx, fy), max(fx, fy))] += 1
    native_obs = Counter(pair.shape_key() for pair in dst_obs)
    report["multiset_obs_swcs"] = mapped_obs == native_obs

    report["iota_source"] = _serialize_value(obstruction_index(m, "submodule", guards))
    report["iota_image"] = _serialize_value(obstruction_index(fm, "submodule", guards))
    report["iota_agrees"] = report["iota_source"] == report["iota_image"]

    report["ok"] = (all(report["emptiness"].values())
                    and report["multiset_def_c4"]
                    and report["multiset_def_c4star"]
                    and report["multiset_obs_swcs"]
                    and report["iota_agrees"])
    return report


# ---------------------------------------------------------------------------
# transport property checks (used by the suite)
# ---------------------------------------------------------------------------

def transport_property_check(prog: Progenerator, m: RightModule,
                             guards: Guards = DEFAULT_GUARDS) -> dict:
    """Summandhood, semisimplicity and essentiality of every submodule
    must agree with their transports; the lattice map must be an order
    isomorphism onto the image lattice."""
    tr = apply_functor(prog, m)
    lat = all_submodules(m, guards.max_lattice_vectors)
    lat_image = all_submodules(tr.image, guards.max_lattice_vectors)

    transported = [transport_submodule(tr, n) for n in lat.members]
    keys = {s.key() for s in transported}
    bijective = (len(keys) == len(lat.members)
                 and keys == {s.key() for s in lat_image.members})

    order_ok = True
    for i, a in enumerate(lat.members):
        for j, b in enumerate(lat.members):
            if b.contains(a) != transported[j].contains(transported[i]):
                order_ok = False
                break
        if not order_ok:
            break

    summand_ok = all(
        (is_summand(n, m) is not None) == (is_summand(tn, tr.image) is not None)
        for n, tn in zip(lat.members, transported))
    semisimple_ok = all(
        is_semisimple(n.as_module()) == is_semisimple(tn.as_module())
        for n, tn in zip(lat.members, transported))
    essential_ok = all(
        is_essential(n, m) == is_essential(tn, tr.image)
        for n, tn in zip(lat.members, transported))

    return {
        "module": m.name,
        "progenerator": prog.name(),
        "lattice_bijective": bijective,
        "order_isomorphism": order_ok,
        "summand_agreement": summand_ok,
        "semisimple_agreement": semisimple_ok,
        "essential_agreement": essential_ok,
        "ok": bijective and order_ok and summand_ok and semisimple_ok and essential_ok,
        "pairs": len(lat.members),
    }
