"""
Finite right modules over a FiniteAlgebra.

A module of GF(p)-dimension m is one m x m action matrix per ring basis
element, acting on row vectors: v * b_j = v @ rho(b_j).  Submodules are
canonical reduced-echelon row spaces, so equality of submodules is
equality of basis arrays.  Homomorphisms f carry the row convention
f(v) = v @ f.matrix and commute with the action.
"""

from __future__ import annotations

import numpy as np

from . import linalg
from .algebra import FiniteAlgebra, jacobson_radical
from .guards import IsoInconclusive, check_guard


class RightModule:
    """Right module over a FiniteAlgebra, given by action matrices."""

    def __init__(self, ring: FiniteAlgebra, action, name: str = "M", validate: bool = True):
        self.ring = ring
        self.p = ring.p
        act = linalg.as_gf(action, self.p)
        if act.ndim != 3 or act.shape[0] != ring.dim or act.shape[1] != act.shape[2]:
            raise ValueError("action must have shape (ring.dim, m, m)")
        self.action = act
        self.dim = act.shape[1]
        self.name = name
        if validate:
            self._validate()
        self.action.setflags(write=False)
        self._cache: dict = {}

    def _validate(self):
        p = self.p
        ident = linalg.eye(self.dim)
        rho_one = np.einsum("j,jab->ab", self.ring.one, self.action) % p
        if not np.array_equal(rho_one, ident):
            raise ValueError("rho(1) is not the identity matrix")
        prod = np.einsum("iab,jbc->ijac", self.action, self.action) % p
        expect = np.einsum("ijk,kac->ijac", self.ring.sc, self.action) % p
        if not np.array_equal(prod, expect):
            i, j = np.argwhere(np.any(prod != expect, axis=(2, 3)))[0]
            raise ValueError(
                f"action not multiplicative at ring basis pair (i,j)=({i},{j})")

    def rho(self, ring_coords) -> np.ndarray:
        """Action matrix of an arbitrary ring element."""
        c = linalg.as_gf(ring_coords, self.p)
        return np.einsum("j,jab->ab", c, self.action) % self.p

    def act_rows(self, rows) -> np.ndarray:
        """All basis actions applied to each row: shape (k*ring.dim, m)."""
        rows = linalg.as_gf(rows, self.p)
        out = np.einsum("ka,jab->kjb", rows, self.action) % self.p
        return out.reshape(-1, self.dim)

    def zero_submodule(self) -> "Submodule":
        return Submodule(self, linalg.zeros(0, self.dim))

    def full_submodule(self) -> "Submodule":
        return Submodule(self, linalg.eye(self.dim))

    def __repr__(self):
        return f"RightModule({self.name} over {self.ring.name}, dim={self.dim})"


def build_module(ring: FiniteAlgebra, action, name: str = "M") -> RightModule:
    """Validating constructor for a right module from action matrices."""
    return RightModule(ring, action, name=name, validate=True)


def regular_module(ring: FiniteAlgebra) -> RightModule:
    """The regular module: the ring acting on itself by right multiplication."""
    if "regular_module" not in ring._cache:
        mod = RightModule(ring, ring.right_regular_stack(), name=f"{ring.name}_reg")
        ring._cache["regular_module"] = mod
    return ring._cache["regular_module"]


def direct_sum(*parts: RightModule, name: str | None = None):
    """Block-diagonal direct sum with canonical injections and projections.

    Returns (module, injections, projections).
    """
    if not parts:
        raise ValueError("direct sum of no parts")
    ring = parts[0].ring
    for m in parts:
        if m.ring is not ring:
            raise ValueError("direct sum parts must share the ring")
    dims = [m.dim for m in parts]
    total = sum(dims)
    action = np.zeros((ring.dim, total, total), dtype=np.int64)
    offset = 0
    for m in parts:
        action[:, offset: offset + m.dim, offset: offset + m.dim] = m.action
        offset += m.dim
    name = name or "(" + "+".join(m.name for m in parts) + ")"
    out = RightModule(ring, action, name=name)
    injections, projections = [], []
    offset = 0
    for m in parts:
        inj = linalg.zeros(m.dim, total)
        inj[:, offset: offset + m.dim] = linalg.eye(m.dim)
        proj = linalg.zeros(total, m.dim)
        proj[offset: offset + m.dim, :] = linalg.eye(m.dim)
        injections.append(ModuleHom(m, out, inj))
        projections.append(ModuleHom(out, m, proj))
        offset += m.dim
    return out, injections, projections


class Submodule:
    """Action-closed subspace in canonical reduced echelon form."""

    def __init__(self, parent: RightModule, basis, check: bool = True):
        self.parent = parent
        if np.asarray(basis).size:
            b = linalg.row_space(basis, parent.p)
        else:
            b = linalg.zeros(0, parent.dim)
        if b.shape[1] != parent.dim:
            raise ValueError("basis width does not match module dimension")
        self.basis = b
        if check and b.shape[0]:
            acted = parent.act_rows(b)
            if not linalg.in_row_space(acted, b, parent.p):
                raise ValueError("span is not closed under the ring action")
        self.basis.setflags(write=False)
        self._cache: dict = {}

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def key(self) -> bytes:
        return self.basis.tobytes()

    def __eq__(self, other):
        return (isinstance(other, Submodule)
                and other.parent is self.parent
                and np.array_equal(other.basis, self.basis))

    def __hash__(self):
        return hash((id(self.parent), self.key()))

    def contains(self, other: "Submodule") -> bool:
        if other.dim == 0:
            return True
        return linalg.in_row_space(other.basis, self.basis, self.parent.p)

    def contains_rows(self, rows) -> bool:
        return linalg.in_row_space(rows, self.basis, self.parent.p)

    def membership_cols(self) -> np.ndarray:
        """Matrix Q with v in this submodule iff v @ Q = 0."""
        if "memb" not in self._cache:
            if self.dim == 0:
                q = linalg.eye(self.parent.dim)
            else:
                q = linalg.right_kernel_cols(self.basis, self.parent.p)
            self._cache["memb"] = q
        return self._cache["memb"]

    def as_module(self) -> RightModule:
        """The submodule as an abstract module in its own basis."""
        if "abstract" in self._cache:
            return self._cache["abstract"]
        parent, p = self.parent, self.parent.p
        if self.dim == parent.dim:
            self._cache["abstract"] = parent
            return parent
        action = np.zeros((parent.ring.dim, self.dim, self.dim), dtype=np.int64)
        if self.dim:
            for j in range(parent.ring.dim):
                rows = self.basis @ parent.action[j] % p
                coeff = linalg.express_rows(rows, self.basis, p)
                if coeff is None:
                    raise ValueError("span is not closed under the ring action")
                action[j] = coeff
        mod = RightModule(parent.ring, action,
                          name=f"{parent.name}|sub{self.dim}", validate=False)
        self._cache["abstract"] = mod
        return mod

    def to_parent(self, abstract_rows) -> np.ndarray:
        rows = linalg.as_gf(abstract_rows, self.parent.p)
        if self.dim == self.parent.dim:
            return rows
        return rows @ self.basis % self.parent.p

    def from_parent(self, parent_rows):
        rows = linalg.as_gf(parent_rows, self.parent.p)
        if self.dim == self.parent.dim:
            return rows
        return linalg.express_rows(rows, self.basis, self.parent.p)

    def sub_in_parent(self, sub: "Submodule") -> "Submodule":
        """Lift a submodule of the abstract module back into the parent."""
        return Submodule(self.parent, self.to_parent(sub.basis), check=False)

    def __repr__(self):
        return f"Submodule(dim={self.dim} of {self.parent.name})"


class ModuleHom:
    """Action-commuting linear map, row convention f(v) = v @ matrix."""

    def __init__(self, source: RightModule, target: RightModule, matrix, check: bool = True):
        if source.ring is not target.ring:
            raise ValueError("hom between modules over different rings")
        self.source = source
        self.target = target
        self.p = source.p
        mat = linalg.as_gf(matrix, self.p)
        if mat.shape != (source.dim, target.dim):
            raise ValueError("hom matrix has wrong shape")
        self.matrix = mat
        if check and mat.size:
            left = np.einsum("jab,bc->jac", source.action, mat) % self.p
            right = np.einsum("ab,jbc->jac", mat, target.action) % self.p
            if not np.array_equal(left, right):
                j = int(np.argwhere(np.any(left != right, axis=(1, 2)))[0, 0])
                raise ValueError(f"map does not commute with ring basis element {j}")
        self.matrix.setflags(write=False)

    def then(self, other: "ModuleHom") -> "ModuleHom":
        """Composite: self first, then other."""
        if other.source is not self.target:
            raise ValueError("composition mismatch")
        return ModuleHom(self.source, other.target,
                         self.matrix @ other.matrix % self.p, check=False)

    def rank(self) -> int:
        return linalg.rank(self.matrix, self.p)

    def is_injective(self) -> bool:
        return self.rank() == self.source.dim

    def is_surjective(self) -> bool:
        return self.rank() == self.target.dim

    def is_isomorphism(self) -> bool:
        return self.source.dim == self.target.dim and self.is_injective()

    def kernel(self) -> Submodule:
        return Submodule(self.source, linalg.left_nullspace(self.matrix, self.p),
                         check=False)

    def image(self) -> Submodule:
        return Submodule(self.target, linalg.row_space(self.matrix, self.p),
                         check=False)

    def inverse(self) -> "ModuleHom":
        inv = linalg.inv_mod(self.matrix, self.p)
        if inv is None:
            raise ValueError("hom is not invertible")
        return ModuleHom(self.target, self.source, inv, check=False)

    def __repr__(self):
        return f"ModuleHom({self.source.name} -> {self.target.name})"


# ---------------------------------------------------------------------------
# hom spaces
# ---------------------------------------------------------------------------

def hom_space_matrices(m: RightModule, n: RightModule) -> np.ndarray:
    """Canonical basis of Hom(M, N) as a (k, dim M, dim N) array.

    Solves the commutation system rho_M(b) @ F = F @ rho_N(b) for all
    ring basis elements b.
    """
    key = ("homspace", id(n))
    cached = m._cache.get(key)
    if cached is not None and cached[0] is n:
        return cached[1]
    if m.ring is not n.ring:
        raise ValueError("hom between modules over different rings")
    p = m.p
    a, b = m.dim, n.dim
    if a == 0 or b == 0:
        mats = np.zeros((0, a, b), dtype=np.int64)
    else:
        ident_a = linalg.eye(a)
        ident_b = linalg.eye(b)
        # Commuting with a generating set of the algebra commutes with all
        # of it (the commutant is a unital subalgebra), so the system only
        # ranges over generator indices.  Unknown F is flattened row-major
        # as x[(s, t)] = F[s, t]; each equation column is one entry (r, c)
        # of rho_M(j) @ F - F @ rho_N(j).  Solved one generator at a time,
        # restricting the solution space at each stage.
        sols = None
        for j in m.ring.generator_indices():
            t1 = np.einsum("rs,xc->sxrc", m.action[j], ident_b)
            t2 = np.einsum("sr,xc->sxrc", ident_a, n.action[j])
            block = ((t1 - t2) % p).reshape(a * b, a * b)
            if sols is None:
                sols = linalg.left_nullspace(block, p)
            else:
                coeffs = linalg.left_nullspace(sols @ block % p, p)
                sols = coeffs @ sols % p
            if sols.shape[0] == 0:
                break
        if sols is None:
            sols = linalg.eye(a * b)
        mats = linalg.row_space(sols, p).reshape(-1, a, b)
    mats.setflags(write=False)
    m._cache[key] = (n, mats)
    return mats


def hom_basis(m: RightModule, n: RightModule) -> list[ModuleHom]:
    """Basis of Hom(M, N) in deterministic echelon order."""
    return [ModuleHom(m, n, mat, check=False) for mat in hom_space_matrices(m, n)]


def hom_dim(m: RightModule, n: RightModule) -> int:
    return hom_space_matrices(m, n).shape[0]


def hom_vanishes(m: RightModule, n: RightModule) -> bool:
    return hom_dim(m, n) == 0


# ---------------------------------------------------------------------------
# submodules, lattice, socle
# ---------------------------------------------------------------------------

def submodule_span(m: RightModule, generators) -> Submodule:
    """Smallest action-closed subspace containing the generators."""
    gens = linalg.as_gf(generators, m.p).reshape(-1, m.dim)
    current = linalg.row_space(gens, m.p)
    while True:
        if current.shape[0] == 0:
            return Submodule(m, current, check=False)
        acted = m.act_rows(current)
        bigger = linalg.sum_rows(current, acted, m.p)
        if bigger.shape[0] == current.shape[0]:
            return Submodule(m, bigger, check=False)
        current = bigger


def cyclic_submodule_basis(m: RightModule, vector) -> np.ndarray:
    """Canonical basis of v*R (one action step suffices: rho is multiplicative
    and the identity lies in the span of the ring basis)."""
    v = linalg.as_gf(vector, m.p).reshape(m.dim)
    rows = np.einsum("a,jab->jb", v, m.action) % m.p
    return linalg.row_space(rows, m.p)


class SubmoduleLattice:
    """Complete submodule list with containment data."""

    def __init__(self, parent: RightModule, members: list[Submodule]):
        self.parent = parent
        self.members = tuple(members)
        self._index = {s.key(): i for i, s in enumerate(self.members)}
        self._contains: np.ndarray | None = None

    def __len__(self):
        return len(self.members)

    def index_of(self, sub: Submodule) -> int:
        try:
            return self._index[sub.key()]
        except KeyError:
            raise ValueError("submodule is not a lattice member") from None

    def contains_matrix(self) -> np.ndarray:
        """Boolean matrix C with C[i, j] true iff members[i] <= members[j]."""
        if self._contains is None:
            n = len(self.members)
            c = np.zeros((n, n), dtype=bool)
            for i, a in enumerate(self.members):
                for j, b in enumerate(self.members):
                    if a.dim <= b.dim:
                        c[i, j] = b.contains(a)
            self._contains = c
        return self._contains

    def minimal_members(self) -> list[Submodule]:
        """Nonzero members containing no smaller nonzero member."""
        out = []
        c = self.contains_matrix()
        for i, s in enumerate(self.members):
            if s.dim == 0:
                continue
            below = [j for j in range(len(self.members))
                     if c[j, i] and 0 < self.members[j].dim < s.dim]
            if not below:
                out.append(s)
        return out


def _cyclic_bases_gf2(m: RightModule, total: int) -> list[np.ndarray]:
    """All distinct cyclic-submodule bases over GF(2), rows bit-packed
    into ints so the per-vector elimination avoids numpy overhead."""
    width = m.dim
    weights = (1 << np.arange(width - 1, -1, -1)).astype(np.int64)
    distinct: dict[tuple, None] = {(): None}
    for _, block in linalg.coeff_blocks(total, width, 2, block=2048):
        acted = np.einsum("na,jab->njb", block, m.action) % 2
        packed = acted @ weights
        for t in range(packed.shape[0]):
            pivots: dict[int, int] = {}
            for r in packed[t]:
                r = int(r)
                while r:
                    msb = r.bit_length() - 1
                    if msb in pivots:
                        r ^= pivots[msb]
                    else:
                        pivots[msb] = r
                        break
            order = sorted(pivots, reverse=True)
            for pos, bbit in enumerate(order):
                v = pivots[bbit]
                for other in order[:pos]:
                    if (pivots[other] >> bbit) & 1:
                        pivots[other] ^= v
            distinct.setdefault(tuple(pivots[bbit] for bbit in order), None)
    out = []
    for key in distinct:
        rows = np.zeros((len(key), m.dim), dtype=np.int64)
        for i, packed_row in enumerate(key):
            for c in range(m.dim):
                rows[i, c] = (packed_row >> (m.dim - 1 - c)) & 1
        out.append(rows)
    return out


def all_submodules(m: RightModule, max_vectors: int = 2 ** 16) -> SubmoduleLattice:
    """Every submodule: cyclic submodules closed under pairwise sums.

    The guard is checked before the cache so a small-guard call cannot
    ride on a result computed under a larger bound.
    """
    total = m.p ** m.dim
    check_guard(f"submodule lattice of {m.name}", total, max_vectors)
    if "lattice" in m._cache:
        return m._cache["lattice"]
    p = m.p
    seen: dict[bytes, np.ndarray] = {}
    zero = linalg.zeros(0, m.dim)
    seen[zero.tobytes()] = zero
    if p == 2:
        for basis in _cyclic_bases_gf2(m, total):
            seen.setdefault(basis.tobytes(), basis)
    else:
        for _, block in linalg.coeff_blocks(total, m.dim, p):
            acted = np.einsum("na,jab->njb", block, m.action) % p
            for t in range(block.shape[0]):
                basis = linalg.row_space(acted[t], p)
                seen.setdefault(basis.tobytes(), basis)
    # close under pairwise sums, breadth-first until stable
    frontier = list(seen.values())
    cyclics = list(seen.values())
    while frontier:
        fresh = []
        for a in frontier:
            for b in cyclics:
                s = linalg.sum_rows(a, b, p)
                kb = s.tobytes()
                if kb not in seen:
                    seen[kb] = s
                    fresh.append(s)
        frontier = fresh
    members = [Submodule(m, b, check=False) for b in seen.values()]
    members.sort(key=lambda s: (s.dim, s.key()))
    lat = SubmoduleLattice(m, members)
    m._cache["lattice"] = lat
    return lat


def radical_submodule(m: RightModule) -> Submodule:
    """rad(M) = M * J(ring)."""
    rad = jacobson_radical(m.ring).basis
    if rad.shape[0] == 0 or m.dim == 0:
        return m.zero_submodule()
    rows = np.concatenate([m.rho(j) for j in rad], axis=0)
    return Submodule(m, linalg.row_space(rows, m.p), check=False)


def socle(m: RightModule) -> Submodule:
    """soc(M) = annihilator of J(ring) in M (artinian identity)."""
    if "socle" in m._cache:
        return m._cache["socle"]
    rad = jacobson_radical(m.ring).basis
    if rad.shape[0] == 0 or m.dim == 0:
        result = m.full_submodule()
    else:
        stacked = np.concatenate([m.rho(j) for j in rad], axis=1)
        result = Submodule(m, linalg.left_nullspace(stacked, m.p), check=False)
    m._cache["socle"] = result
    return result


def radical_series_dims(m: RightModule) -> tuple[int, ...]:
    """Dims of M, M*J, M*J^2, ... down to zero."""
    dims = [m.dim]
    current = m
    guard = 0
    while dims[-1] > 0:
        sub = radical_submodule(current)
        if sub.dim == dims[-1]:
            raise ValueError("radical series does not terminate (non-nilpotent radical)")
        dims.append(sub.dim)
        current = sub.as_module()
        guard += 1
        if guard > m.dim + 1:
            raise ValueError("radical series too long")
    return tuple(dims)


def socle_series_dims(m: RightModule) -> tuple[int, ...]:
    """Dims of soc(M) <= soc_2(M) <= ... up to M (annihilators of J^k)."""
    rad = jacobson_radical(m.ring).basis
    p = m.p
    dims = []
    power = rad
    while True:
        if power.shape[0] == 0 or m.dim == 0:
            dims.append(m.dim)
            break
        stacked = np.concatenate([m.rho(j) for j in power], axis=1)
        ann = linalg.left_nullspace(stacked, p)
        dims.append(ann.shape[0])
        if ann.shape[0] == m.dim:
            break
        prods = []
        for u in power:
            for v in rad:
                prods.append(m.ring.mul_coords(u, v))
        power = linalg.row_space(np.array(prods, dtype=np.int64), p)
    return tuple(dims)


# ---------------------------------------------------------------------------
# essentiality, summands
# ---------------------------------------------------------------------------

def _check_sub(n: Submodule, m: RightModule):
    if n.parent is not m:
        raise ValueError("submodule does not belong to the given module")


def is_essential(n: Submodule, m: RightModule) -> bool:
    """N <=e M iff soc(M) <= N (valid for finite modules)."""
    _check_sub(n, m)
    return n.contains(socle(m))


def essential_oracle(n: Submodule, m: RightModule,
                     max_vectors: int = 2 ** 16) -> bool:
    """Definitional test: every nonzero cyclic submodule meets N."""
    _check_sub(n, m)
    total = m.p ** m.dim
    check_guard(f"essentiality oracle on {m.name}", total, max_vectors)
    for _, block in linalg.coeff_blocks(total, m.dim, m.p):
        for v in block:
            if not np.any(v):
                continue
            cyc = cyclic_submodule_basis(m, v)
            joint = linalg.sum_rows(cyc, n.basis, m.p)
            if joint.shape[0] >= cyc.shape[0] + n.dim:
                return False  # intersection is zero
    return True


def essential_in(n: Submodule, a: Submodule) -> bool:
    """N <=e A for submodules N <= A of a shared parent."""
    if not a.contains(n):
        return False
    soc_a = linalg.intersect_rows(a.basis, socle(a.parent).basis, a.parent.p)
    return n.contains_rows(soc_a) if soc_a.shape[0] else True


def is_summand(n: Submodule, m: RightModule):
    """Search for a retraction h: M -> N restricting to the identity on N.

    Returns a complement Submodule when N is a direct summand, else None.
    """
    _check_sub(n, m)
    key = ("summand", n.key())
    if key in m._cache:
        return m._cache[key]
    result = _is_summand(n, m)
    m._cache[key] = result
    return result


def _is_summand(n: Submodule, m: RightModule):
    p = m.p
    if n.dim == 0:
        return m.full_submodule()
    if n.dim == m.dim:
        return m.zero_submodule()
    n_mod = n.as_module()
    homs = hom_space_matrices(m, n_mod)
    if homs.shape[0] == 0:
        return None
    # h restricted to N equals the identity: (basis_N @ H) = I, linear in H.
    rows = np.array([(n.basis @ h % p).reshape(-1) for h in homs])
    target = linalg.eye(n.dim).reshape(1, -1)
    coeff = linalg.solve_left_many(rows, target, p)
    if coeff is None:
        return None
    h = np.einsum("k,kab->ab", coeff[0], homs) % p
    complement = linalg.left_nullspace(h, p)
    return Submodule(m, complement, check=False)


# ---------------------------------------------------------------------------
# structure predicates
# ---------------------------------------------------------------------------

def is_semisimple(m: RightModule) -> bool:
    return socle(m).dim == m.dim


def is_simple(m: RightModule, max_vectors: int = 2 ** 16) -> bool:
    """Simple iff nonzero and every nonzero vector generates everything."""
    if m.dim == 0:
        return False
    total = m.p ** m.dim
    check_guard(f"simplicity scan of {m.name}", total, max_vectors)
    for _, block in linalg.coeff_blocks(total, m.dim, m.p):
        for v in block:
            if not np.any(v):
                continue
            if cyclic_submodule_basis(m, v).shape[0] != m.dim:
                return False
    return True


def quotient_module(m: RightModule, n: Submodule):
    """Quotient M/N with basis the non-pivot coordinates of N.

    Returns (quotient, projection hom).
    """
    _check_sub(n, m)
    p = m.p
    red, piv = (linalg.rref(n.basis, p) if n.dim else (n.basis, []))
    nonpiv = [c for c in range(m.dim) if c not in piv]
    k = len(nonpiv)

    def project(rows):
        rows = linalg.as_gf(rows, p).copy()
        for r, c in enumerate(piv):
            rows = (rows - np.outer(rows[:, c], red[r])) % p
        return rows[:, nonpiv] if k else linalg.zeros(rows.shape[0], 0)

    action = np.zeros((m.ring.dim, k, k), dtype=np.int64)
    lifts = linalg.eye(m.dim)[nonpiv] if k else linalg.zeros(0, m.dim)
    for j in range(m.ring.dim):
        action[j] = project(lifts @ m.action[j] % p)
    quot = RightModule(m.ring, action, name=f"{m.name}/sub{n.dim}", validate=False)
    proj = ModuleHom(m, quot, project(linalg.eye(m.dim)), check=False)
    return quot, proj


def _minimal_inside(m: RightModule, max_vectors: int) -> Submodule:
    """A minimal nonzero submodule, by descending through cyclic modules."""
    total = m.p ** m.dim
    check_guard(f"minimal submodule scan of {m.name}", total, max_vectors)
    current: np.ndarray | None = None
    for _, block in linalg.coeff_blocks(total, m.dim, m.p):
        for v in block:
            if np.any(v):
                current = cyclic_submodule_basis(m, v)
                break
        if current is not None:
            break
    assert current is not None, "nonzero module has a nonzero vector"
    while True:
        sub_total = m.p ** current.shape[0]
        descended = False
        for _, block in linalg.coeff_blocks(sub_total, current.shape[0], m.p):
            vs = block @ current % m.p
            for v in vs:
                if not np.any(v):
                    continue
                cyc = cyclic_submodule_basis(m, v)
                if cyc.shape[0] < current.shape[0]:
                    current = cyc
                    descended = True
                    break
            if descended:
                break
        if not descended:
            return Submodule(m, current, check=False)


def _semisimple_length(m: RightModule, max_vectors: int) -> int:
    count = 0
    current = m
    while current.dim > 0:
        minimal = _minimal_inside(current, max_vectors)
        complement = is_summand(minimal, current)
        assert complement is not None, "semisimple layer must split"
        current = complement.as_module()
        count += 1
    return count


def composition_length(m: RightModule, max_vectors: int = 2 ** 16) -> int:
    """Length = sum of socle-layer lengths (Jordan-Hoelder count)."""
    if "length" in m._cache:
        return m._cache["length"]
    if m.dim == 0:
        result = 0
    else:
        soc = socle(m)
        layer = _semisimple_length(soc.as_module(), max_vectors)
        if soc.dim == m.dim:
            result = layer
        else:
            quot, _ = quotient_module(m, soc)
            result = layer + composition_length(quot, max_vectors)
    m._cache["length"] = result
    return result


def fingerprint(m: RightModule) -> tuple:
    """Cheap isomorphism-invariant screen (no lattice needed)."""
    if "fingerprint" not in m._cache:
        m._cache["fingerprint"] = (
            m.dim,
            socle(m).dim,
            composition_length(m),
            hom_dim(m, m),
            radical_series_dims(m),
            socle_series_dims(m),
        )
    return m._cache["fingerprint"]


# ---------------------------------------------------------------------------
# isomorphism testing
# ---------------------------------------------------------------------------

def iso_test(m: RightModule, n: RightModule,
             max_iso: int = 2 ** 16, rng_seed: int = 1,
             sample_budget: int = 20000):
    """Find an isomorphism M -> N, or return None.

    Invariant screens run first; then the hom space is searched for an
    invertible element, exhaustively when p^dim Hom <= max_iso and by
    seeded random sampling otherwise.  A failed sampling search raises
    IsoInconclusive rather than returning a wrong negative.
    """
    if m.ring is not n.ring:
        raise ValueError("iso test between modules over different rings")
    if m is n:
        return ModuleHom(m, n, linalg.eye(m.dim), check=False)
    if fingerprint(m) != fingerprint(n):
        return None
    if m.dim == 0:
        return ModuleHom(m, n, linalg.zeros(0, 0), check=False)
    homs = hom_space_matrices(m, n)
    k = homs.shape[0]
    if k == 0:
        return None
    total = m.p ** k
    if total <= max_iso:
        for _, block in linalg.coeff_blocks(total, k, m.p):
            cands = np.einsum("nk,kab->nab", block, homs) % m.p
            for t in range(cands.shape[0]):
                if linalg.rank(cands[t], m.p) == m.dim:
                    return ModuleHom(m, n, cands[t], check=False)
        return None
    rng = np.random.default_rng(rng_seed)
    for _ in range(sample_budget):
        coeff = rng.integers(0, m.p, size=k)
        cand = np.einsum("k,kab->ab", coeff, homs) % m.p
        if linalg.rank(cand, m.p) == m.dim:
            return ModuleHom(m, n, cand, check=False)
    raise IsoInconclusive(
        f"no isomorphism found between {m.name} and {n.name} within "
        f"{sample_budget} samples; result is inconclusive")


def is_orthogonal(m: RightModule, n: RightModule,
                  max_vectors: int = 2 ** 16) -> bool:
    """Hom(X, Y) = 0 for every pair of submodules X <= M, Y <= N."""
    lat_m = all_submodules(m, max_vectors)
    lat_n = all_submodules(n, max_vectors)
    for x in lat_m.members:
        for y in lat_n.members:
            if x.dim == 0 or y.dim == 0:
                continue
            if not hom_vanishes(x.as_module(), y.as_module()):
                return False
    return True


# ---------------------------------------------------------------------------
# square-freeness and the classical predicate block
# ---------------------------------------------------------------------------

def _has_isomorphic_halves(m: RightModule, max_end: int, max_iso: int,
                           rng_seed: int) -> bool:
    """True iff M = X + X' internally with X isomorphic to X', X nonzero."""
    from .conditions import enumerate_decompositions  # cycle kept local
    for dec in enumerate_decompositions(m, max_end):
        if dec.a.dim == 0 or dec.b.dim == 0:
            continue
        if dec.a.dim != dec.b.dim:
            continue
        if iso_test(dec.a.as_module(), dec.b.as_module(),
                    max_iso=max_iso, rng_seed=rng_seed) is not None:
            return True
    return False


def is_summand_square_free(m: RightModule, max_end: int = 2 ** 20,
                           max_iso: int = 2 ** 16, rng_seed: int = 1) -> bool:
    """No nonzero direct summand of M has the form X + X with X ~ X."""
    from .conditions import summand_list
    for d in summand_list(m, max_end):
        if d.dim == 0:
            continue
        if _has_isomorphic_halves(d.as_module(), max_end, max_iso, rng_seed):
            return False
    return True


def is_square_free(m: RightModule, max_vectors: int = 2 ** 16,
                   max_end: int = 2 ** 20, max_iso: int = 2 ** 16,
                   rng_seed: int = 1) -> bool:
    """No nonzero submodule of M has the form X + X with X ~ X."""
    for sub in all_submodules(m, max_vectors).members:
        if sub.dim == 0:
            continue
        if _has_isomorphic_halves(sub.as_module(), max_end, max_iso, rng_seed):
            return False
    return True


def is_closed(n: Submodule, m: RightModule, max_vectors: int = 2 ** 16) -> bool:
    """No member strictly above N has N essential in it."""
    _check_sub(n, m)
    for member in all_submodules(m, max_vectors).members:
        if member.dim <= n.dim or not member.contains(n):
            continue
        if essential_in(n, member):
            return False
    return True


def classical_predicates(m: RightModule, max_vectors: int = 2 ** 16,
                         max_end: int = 2 ** 20, max_iso: int = 2 ** 16,
                         rng_seed: int = 1) -> dict:
    """C2, C3, CS, weak CS, continuous and directly finite flags."""
    from .conditions import summand_list
    lat = all_submodules(m, max_vectors)
    summands = summand_list(m, max_end)
    summand_keys = {s.key() for s in summands}

    c2 = True
    for n in lat.members:
        if n.key() in summand_keys:
            continue
        for d in summands:
            if n.dim != d.dim:
                continue
            if iso_test(n.as_module(), d.as_module(),
                        max_iso=max_iso, rng_seed=rng_seed) is not None:
                c2 = False
                break
        if not c2:
            break

    c3 = True
    for a in summands:
        for b in summands:
            inter = linalg.intersect_rows(a.basis, b.basis, m.p)
            if inter.shape[0]:
                continue
            total = Submodule(m, linalg.sum_rows(a.basis, b.basis, m.p), check=False)
            if total.key() not in summand_keys and is_summand(total, m) is None:
                c3 = False
                break
        if not c3:
            break

    def essentially_in_summand(n: Submodule) -> bool:
        return any(essential_in(n, d) for d in summands)

    cs = all(essentially_in_summand(n) for n in lat.members)
    weak_cs = all(essentially_in_summand(n) for n in lat.members
                  if is_semisimple(n.as_module()))

    # Finite-dimensional modules are directly finite: an isomorphism
    # M ~ M + N forces dim N = 0.
    directly_finite = True

    return {
        "C2": c2,
        "C3": c3,
        "CS": cs,
        "weak_CS": weak_cs,
        "continuous": cs and c2,
        "directly_finite": directly_finite,
    }
