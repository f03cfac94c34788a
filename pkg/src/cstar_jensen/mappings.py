"""Constructors for mappings between module spaces and for orthogonal pairs.

Mappings form a small expression tree: module-linear maps given by a right
coefficient matrix, diagonals of inner-product quadratic forms, constants,
sums and pointwise bump perturbations. The tree serializes to a tagged JSON
union so scenarios can describe mappings on disk.

The pair machinery realizes triples (phi, psi, a) with

    <phi(z), psi(w)> = 0
    a <phi(z), phi(w)> a^* = (1-a) <psi(z), psi(w)> (1-a)^*

checked on all pairs of module basis vectors. For module-linear phi, psi
and central a this extends to arbitrary arguments; see validate_pair.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import algebra as alg
from . import hilbert as hb
from .algebra import AlgebraElement, AlgebraShape, Coefficient
from .errors import (
    DomainError,
    PairConditionViolated,
    ShapeError,
    SpaceMismatch,
    ValidationError,
)
from .hilbert import ModuleSpace, ModuleVector

# pair conditions must hold on basis vectors within this residual
PAIR_VALIDATION_TOL = 1e-10
# unitary equivalence predicate tolerance
UNITARY_TOL = 1e-9
# kernel solutions must re-verify their intertwining constraints within this
KERNEL_RESIDUAL_TOL = 1e-8


class Mapping:
    """Base class; subclasses implement evaluate()."""

    __slots__ = ("domain", "codomain")

    def __init__(self, domain: ModuleSpace, codomain: ModuleSpace):
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "codomain", codomain)

    def __setattr__(self, name, value):
        raise AttributeError("mappings are immutable")

    def __call__(self, x: ModuleVector) -> ModuleVector:
        if x.space != self.domain:
            raise SpaceMismatch("argument does not live in the mapping domain")
        return self.evaluate(x)

    def evaluate(self, x: ModuleVector) -> ModuleVector:
        raise NotImplementedError


class Linear(Mapping):
    """T(x)_j = sum_i x_i C[i][j]; module-linear for the left action."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        rows = tuple(tuple(row) for row in coeffs)
        if not rows or not rows[0]:
            raise ShapeError("coefficient matrix must be nonempty")
        m_out = len(rows[0])
        shape = rows[0][0].shape
        for row in rows:
            if len(row) != m_out:
                raise ShapeError("ragged coefficient matrix")
            for entry in row:
                if entry.shape.block_dims != shape.block_dims:
                    raise ShapeError("coefficient entries from different algebras")
        super().__init__(
            ModuleSpace(shape, len(rows)), ModuleSpace(shape, m_out)
        )
        object.__setattr__(self, "coeffs", rows)

    def evaluate(self, x: ModuleVector) -> ModuleVector:
        coords = x.coords
        out = []
        for j in range(self.codomain.rank):
            acc = alg.mul(coords[0], self.coeffs[0][j])
            for i in range(1, self.domain.rank):
                acc = alg.add(acc, alg.mul(coords[i], self.coeffs[i][j]))
            out.append(acc)
        return ModuleVector._wrap(self.codomain, tuple(out))


class QuadDiag(Mapping):
    """x -> scale * (<x, x> + <x, x>) . g, the diagonal of a quadratic form."""

    __slots__ = ("g", "scale")

    def __init__(self, domain: ModuleSpace, g: ModuleVector, scale: float):
        if domain.algebra != g.space.algebra:
            raise SpaceMismatch("target vector must share the domain algebra")
        scale = complex(scale)
        if scale.imag != 0.0:
            raise DomainError("scale must be real so values stay symmetric")
        super().__init__(domain, g.space)
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "scale", float(scale.real))

    def evaluate(self, x: ModuleVector) -> ModuleVector:
        k = hb.inner_product(x, x)
        return hb.act(alg.scale(alg.add(k, k), self.scale), self.g)


class Constant(Mapping):
    __slots__ = ("value",)

    def __init__(self, domain: ModuleSpace, value: ModuleVector):
        super().__init__(domain, value.space)
        object.__setattr__(self, "value", value)

    def evaluate(self, x: ModuleVector) -> ModuleVector:
        return self.value


class Sum(Mapping):
    __slots__ = ("children",)

    def __init__(self, children):
        children = tuple(children)
        if not children:
            raise ShapeError("a sum needs at least one child")
        dom, cod = children[0].domain, children[0].codomain
        for child in children[1:]:
            if child.domain != dom or child.codomain != cod:
                raise SpaceMismatch("sum children must share domain and codomain")
        super().__init__(dom, cod)
        object.__setattr__(self, "children", children)

    def evaluate(self, x: ModuleVector) -> ModuleVector:
        out = self.children[0].evaluate(x)
        for child in self.children[1:]:
            out = hb.vec_add(out, child.evaluate(x))
        return out


class Bump(Mapping):
    """delta inside the hard ball ||x - site|| < radius, zero outside."""

    __slots__ = ("site", "delta", "radius")

    def __init__(self, site: ModuleVector, delta: ModuleVector, radius: float):
        radius = float(radius)
        if radius <= 0.0:
            raise DomainError("bump radius must be positive")
        super().__init__(site.space, delta.space)
        object.__setattr__(self, "site", site)
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "radius", radius)

    def evaluate(self, x: ModuleVector) -> ModuleVector:
        if hb.module_norm(hb.vec_sub(x, self.site)) < self.radius:
            return self.delta
        return self.codomain.zero()


def linear_map(coeffs) -> Linear:
    """Build the module-linear map with right coefficient matrix C[i][j]."""
    return Linear(coeffs)


def zero_linear(domain: ModuleSpace, codomain: ModuleSpace) -> Linear:
    z = alg.zero(domain.algebra)
    return Linear([[z] * codomain.rank for _ in range(domain.rank)])


class QuadForm:
    """B(x, y) = scale * (<x, y> + <y, x>) . g, symmetric and biadditive."""

    __slots__ = ("domain", "codomain", "g", "scale")

    def __init__(self, domain: ModuleSpace, g: ModuleVector, scale: float):
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "codomain", g.space)
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "scale", float(scale))

    def __call__(self, x: ModuleVector, y: ModuleVector) -> ModuleVector:
        k = alg.add(hb.inner_product(x, y), hb.inner_product(y, x))
        return hb.act(alg.scale(k, self.scale), self.g)


def quad_form(
    domain: ModuleSpace, g: ModuleVector, scale: float
) -> tuple[QuadForm, QuadDiag]:
    """The symmetric bimap and its diagonal mapping, sharing g and scale."""
    diag = QuadDiag(domain, g, scale)
    return QuadForm(domain, g, diag.scale), diag


def compose_jensen(
    additive: Mapping, quad_diag: Mapping | None, constant: ModuleVector
) -> Mapping:
    """f = additive + quad_diag + constant; quad_diag may be omitted."""
    children = [additive]
    if quad_diag is not None:
        children.append(quad_diag)
    children.append(Constant(additive.domain, constant))
    return Sum(children)


def perturb(
    f: Mapping, site: ModuleVector, delta: ModuleVector, radius: float
) -> Mapping:
    """f plus a hard bump of height delta around site."""
    return Sum([f, Bump(site, delta, radius)])


# ---------------------------------------------------------------------------
# mapping (de)serialization


def mapping_to_obj(f: Mapping) -> dict:
    if isinstance(f, Linear):
        return {
            "kind": "linear",
            "coeffs": [[c.to_obj() for c in row] for row in f.coeffs],
        }
    if isinstance(f, Sum):
        return {"kind": "sum", "children": [mapping_to_obj(c) for c in f.children]}
    if isinstance(f, Constant):
        return {"kind": "constant", "value": f.value.to_obj()}
    if isinstance(f, QuadDiag):
        return {"kind": "quad_diag", "g": f.g.to_obj(), "scale": f.scale}
    if isinstance(f, Bump):
        return {
            "kind": "perturb",
            "site": f.site.to_obj(),
            "delta": f.delta.to_obj(),
            "radius": f.radius,
        }
    raise ValidationError(f"cannot serialize mapping of type {type(f).__name__}")


def mapping_from_obj(
    obj, domain: ModuleSpace, codomain: ModuleSpace
) -> Mapping:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ValidationError("mapping object needs a 'kind' tag")
    kind = obj["kind"]
    if kind == "linear":
        coeffs = [
            [alg.element_from_obj(c) for c in row] for row in obj["coeffs"]
        ]
        f = Linear(coeffs)
    elif kind == "sum":
        children = [
            mapping_from_obj(c, domain, codomain) for c in obj["children"]
        ]
        f = Sum(children)
    elif kind == "constant":
        f = Constant(domain, hb.vector_from_obj(obj["value"], codomain))
    elif kind == "quad_diag":
        f = QuadDiag(
            domain, hb.vector_from_obj(obj["g"], codomain), obj["scale"]
        )
    elif kind == "perturb":
        f = Bump(
            hb.vector_from_obj(obj["site"], domain),
            hb.vector_from_obj(obj["delta"], codomain),
            obj["radius"],
        )
    else:
        raise ValidationError(f"unknown mapping kind {kind!r}")
    if f.domain != domain or f.codomain != codomain:
        raise SpaceMismatch("decoded mapping does not match the declared spaces")
    return f


# ---------------------------------------------------------------------------
# orthogonal additive pairs


@dataclass(frozen=True)
class AdditivePair:
    """A validated triple (phi, psi, a) between F and E.

    orth_residual and balance_residual are the largest residuals seen while
    checking the two pair conditions over all basis pairs. validated is only
    set by validate_pair, and only when both stay at or below
    PAIR_VALIDATION_TOL.
    """

    phi: Mapping
    psi: Mapping
    coefficient: Coefficient
    validated: bool
    orth_residual: float
    balance_residual: float

    def to_obj(self) -> dict:
        return {
            "phi": mapping_to_obj(self.phi),
            "psi": mapping_to_obj(self.psi),
            "a": self.coefficient.value.to_obj(),
        }


def pair_condition_residuals(
    phi: Mapping, psi: Mapping, a: Coefficient
) -> tuple[float, float]:
    """Largest residual of each pair condition over module basis pairs."""
    f_space = phi.domain
    phis = [phi(f_space.basis_vector(i)) for i in range(f_space.rank)]
    psis = [psi(f_space.basis_vector(i)) for i in range(f_space.rank)]
    a_star = alg.adjoint(a.value)
    co_star = alg.adjoint(a.co)
    worst_orth = 0.0
    worst_balance = 0.0
    for i in range(f_space.rank):
        for j in range(f_space.rank):
            cross = hb.inner_product(phis[i], psis[j])
            r_orth = alg.cstar_norm(cross) / (
                1.0 + hb.module_norm(phis[i]) * hb.module_norm(psis[j])
            )
            lhs = alg.mul(alg.mul(a.value, hb.inner_product(phis[i], phis[j])), a_star)
            rhs = alg.mul(alg.mul(a.co, hb.inner_product(psis[i], psis[j])), co_star)
            r_bal = alg.residual(lhs, rhs)
            worst_orth = max(worst_orth, r_orth)
            worst_balance = max(worst_balance, r_bal)
    return worst_orth, worst_balance


def validate_pair(
    phi: Mapping, psi: Mapping, a: Coefficient, tol: float = PAIR_VALIDATION_TOL
) -> AdditivePair:
    """Check both pair conditions on all basis pairs and certify the triple.

    Basis pairs decide the conditions for module-linear phi, psi whenever the
    coefficient is central (scalar per block); every pair this module builds
    keeps exact zeros in the cross terms, so the orthogonality condition
    extends verbatim.
    """
    if phi.domain != psi.domain:
        raise SpaceMismatch("phi and psi must share a domain")
    if phi.codomain != psi.codomain:
        raise SpaceMismatch("phi and psi must share a codomain")
    if a.value.shape != phi.domain.algebra:
        raise SpaceMismatch("coefficient algebra does not match the pair")
    worst_orth, worst_balance = pair_condition_residuals(phi, psi, a)
    if worst_orth > tol:
        raise PairConditionViolated(
            f"orthogonality condition fails with residual {worst_orth:.3e}",
            condition="orthogonality",
            residual=worst_orth,
        )
    if worst_balance > tol:
        raise PairConditionViolated(
            f"balance condition fails with residual {worst_balance:.3e}",
            condition="balance",
            residual=worst_balance,
        )
    return AdditivePair(phi, psi, a, True, worst_orth, worst_balance)


def interleave_pair(p: float, n: int) -> AdditivePair:
    """Truncated interleaving pair over the scalars, F = C^(n/2), E = C^n.

    phi spreads F over the even coordinates scaled by 1/(1-p), psi over the
    odd coordinates scaled by 1/p, and the coefficient is (1-p) * 1. Both
    conditions then reduce to sum_k z_k conj(w_k) on either side.
    """
    p = float(p)
    if not 0.0 < p < 1.0:
        raise DomainError(f"p must lie in (0, 1), got {p}")
    if n < 2 or n % 2:
        raise DomainError(f"the ambient rank must be even and >= 2, got {n}")
    shape = AlgebraShape((1,))
    one = alg.unit(shape)
    z = alg.zero(shape)
    half = n // 2
    phi_c = [[z] * n for _ in range(half)]
    psi_c = [[z] * n for _ in range(half)]
    for i in range(half):
        phi_c[i][2 * i] = alg.scale(one, 1.0 / (1.0 - p))
        psi_c[i][2 * i + 1] = alg.scale(one, 1.0 / p)
    a = alg.validate_coefficient(alg.scale(one, 1.0 - p), require_strict_order=True)
    return validate_pair(Linear(phi_c), Linear(psi_c), a)


def morphism_shift_pair(shape: AlgebraShape, m: int) -> AdditivePair:
    """psi includes F = A^m as the first m coordinates of E = A^2m, phi
    shifts it into the last m, and the coefficient is (1/2) * 1.

    phi preserves inner products: <phi(x), phi(y)> = <x, y> exactly.
    """
    if m < 1:
        raise DomainError(f"rank must be positive, got {m}")
    one = alg.unit(shape)
    z = alg.zero(shape)
    phi_c = [[z] * (2 * m) for _ in range(m)]
    psi_c = [[z] * (2 * m) for _ in range(m)]
    for i in range(m):
        phi_c[i][m + i] = one
        psi_c[i][i] = one
    a = alg.validate_coefficient(alg.scale(one, 0.5), require_strict_order=True)
    return validate_pair(Linear(phi_c), Linear(psi_c), a)


def inclusion_pair(
    shape: AlgebraShape, f_rank: int, e_rank: int, a: Coefficient
) -> AdditivePair:
    """A pair for an arbitrary coefficient on disjoint coordinate ranges.

    phi includes F into coordinates 0..f_rank-1 of E; psi lands on the next
    f_rank coordinates with right coefficient d chosen so that
    d d^* = (1-a)^{-1} a a^* ((1-a)^{-1})^*, which balances the second pair
    condition exactly. Needs e_rank >= 2 * f_rank.
    """
    if f_rank < 1 or e_rank < 2 * f_rank:
        raise DomainError(
            f"need e_rank >= 2 * f_rank >= 2, got f_rank={f_rank}, e_rank={e_rank}"
        )
    prod = alg.mul(
        alg.mul(a.co_inv, alg.mul(a.value, alg.adjoint(a.value))),
        alg.adjoint(a.co_inv),
    )
    d_blocks = []
    for b in prod.blocks:
        eigvals, eigvecs = np.linalg.eigh(0.5 * (b + b.conj().T))
        if eigvals[0] <= 0.0:
            raise DomainError("balance operator must stay positive definite")
        d_blocks.append(
            (eigvecs * np.sqrt(eigvals)) @ eigvecs.conj().T
        )
    d = AlgebraElement._wrap(shape, tuple(np.ascontiguousarray(b) for b in d_blocks))
    one = alg.unit(shape)
    z = alg.zero(shape)
    phi_c = [[z] * e_rank for _ in range(f_rank)]
    psi_c = [[z] * e_rank for _ in range(f_rank)]
    for i in range(f_rank):
        phi_c[i][i] = one
        psi_c[i][f_rank + i] = d
    return validate_pair(Linear(phi_c), Linear(psi_c), a)


# ---------------------------------------------------------------------------
# adjointable maps and unitary equivalence


def adjoint_map(u: Linear) -> Linear:
    """The adjoint of a module-linear map: <u x, y> = <x, u* y>.

    With right coefficient matrices this is the blockwise conjugate
    transpose of the matrix, transposed as a matrix of blocks.
    """
    rows = u.codomain.rank
    cols = u.domain.rank
    coeffs = [
        [alg.adjoint(u.coeffs[i][j]) for i in range(cols)] for j in range(rows)
    ]
    return Linear(coeffs)


def _compose_linear(first: Linear, then: Linear) -> Linear:
    """Coefficient matrix of x -> then(first(x)), the product C_first C_then."""
    if first.codomain != then.domain:
        raise SpaceMismatch("maps do not compose")
    out = []
    for i in range(first.domain.rank):
        row = []
        for k in range(then.codomain.rank):
            acc = alg.mul(first.coeffs[i][0], then.coeffs[0][k])
            for j in range(1, first.codomain.rank):
                acc = alg.add(acc, alg.mul(first.coeffs[i][j], then.coeffs[j][k]))
            row.append(acc)
        out.append(row)
    return Linear(out)


def _is_identity_matrix(u: Linear, tol: float) -> bool:
    one = alg.unit(u.domain.algebra)
    z = alg.zero(u.domain.algebra)
    for i in range(u.domain.rank):
        for j in range(u.codomain.rank):
            target = one if i == j else z
            if alg.residual(u.coeffs[i][j], target) > tol:
                return False
    return True


def check_unitary_equivalence(
    u: Linear, tol: float = UNITARY_TOL
) -> bool:
    """True when u* u and u u* are both identities within tol."""
    u_star = adjoint_map(u)
    return _is_identity_matrix(_compose_linear(u, u_star), tol) and (
        _is_identity_matrix(_compose_linear(u_star, u), tol)
    )


# ---------------------------------------------------------------------------
# a-biadditive kernel solver


def _complex_basis(shape: AlgebraShape):
    """Complex basis elements E_(block, row, col) in a fixed order."""
    out = []
    for k, n in enumerate(shape.block_dims):
        for r in range(n):
            for c in range(n):
                blocks = [
                    np.zeros((m, m), dtype=np.complex128) for m in shape.block_dims
                ]
                blocks[k][r, c] = 1.0
                out.append(AlgebraElement(shape, blocks))
    return out


def _element_cvec(x: AlgebraElement) -> np.ndarray:
    return np.concatenate([b.ravel() for b in x.blocks])


def _element_from_cvec(shape: AlgebraShape, vec: np.ndarray) -> AlgebraElement:
    blocks = []
    pos = 0
    for n in shape.block_dims:
        blocks.append(vec[pos : pos + n * n].reshape(n, n))
        pos += n * n
    return AlgebraElement._wrap(shape, tuple(blocks))


def _real_matrix(mc: np.ndarray) -> np.ndarray:
    """Real 2d x 2d matrix of a complex-linear map acting on [re; im]."""
    return np.block([[mc.real, -mc.imag], [mc.imag, mc.real]])


def _conjugation_matrix(a: AlgebraElement, shape: AlgebraShape) -> np.ndarray:
    """Complex matrix of b -> a b a^* in the fixed basis."""
    basis = _complex_basis(shape)
    a_star = alg.adjoint(a)
    cols = [
        _element_cvec(alg.mul(alg.mul(a, e), a_star)) for e in basis
    ]
    return np.stack(cols, axis=1)


def _left_action_matrix(a: AlgebraElement, shape: AlgebraShape) -> np.ndarray:
    basis = _complex_basis(shape)
    cols = [_element_cvec(alg.mul(a, e)) for e in basis]
    return np.stack(cols, axis=1)


class KernelMap:
    """A real-linear map Psi: A -> G stored as a matrix on [re; im] stacks."""

    __slots__ = ("shape", "target", "matrix")

    def __init__(self, shape: AlgebraShape, target: ModuleSpace, matrix: np.ndarray):
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "target", target)
        mat = np.array(matrix, dtype=np.float64)
        mat.flags.writeable = False
        object.__setattr__(self, "matrix", mat)

    def __setattr__(self, name, value):
        raise AttributeError("KernelMap is immutable")

    def __call__(self, b: AlgebraElement) -> ModuleVector:
        if b.shape != self.shape:
            raise ShapeError("argument algebra does not match the kernel map")
        cv = _element_cvec(b)
        out = self.matrix @ np.concatenate([cv.real, cv.imag])
        half = out.size // 2
        cvec = out[:half] + 1j * out[half:]
        da = self.shape.dim
        coords = tuple(
            _element_from_cvec(self.shape, cvec[i * da : (i + 1) * da])
            for i in range(self.target.rank)
        )
        return ModuleVector._wrap(self.target, coords)

    def bimap(self, x: ModuleVector, y: ModuleVector) -> ModuleVector:
        """Lift to B(x, y) = Psi(<x, y> + <y, x>), symmetric and biadditive."""
        k = alg.add(hb.inner_product(x, y), hb.inner_product(y, x))
        return self(k)


@dataclass(frozen=True)
class KernelSolution:
    basis: tuple[KernelMap, ...]
    dimension: int


def solve_abiadditive_kernel(
    a: Coefficient, target: ModuleSpace
) -> KernelSolution:
    """All real-linear Psi: A -> G with Psi(a b a^*) = a.Psi(b) and
    Psi((1-a) b (1-a)^*) = (1-a).Psi(b).

    The two constraints stack into one real-linear system over the entries
    of Psi; the basis of its nullspace comes from a rank-revealing SVD.
    Dimension 0 means only Psi = 0, hence no quadratic kernel of the
    inner-product form is a-biadditive for this coefficient.
    """
    shape = a.value.shape
    da = shape.dim
    r = target.rank
    conj_a = _real_matrix(_conjugation_matrix(a.value, shape))
    conj_co = _real_matrix(_conjugation_matrix(a.co, shape))
    left_a_alg = _real_matrix(_left_action_matrix(a.value, shape))
    left_co_alg = _real_matrix(_left_action_matrix(a.co, shape))

    # On G = A^r the left action acts coordinatewise. The real stacking is
    # [re; im] over the whole coordinate list, so build the complex matrix
    # first and realify once.
    act_a = _real_matrix(np.kron(np.eye(r), _left_action_matrix(a.value, shape)))
    act_co = _real_matrix(np.kron(np.eye(r), _left_action_matrix(a.co, shape)))
    del left_a_alg, left_co_alg

    rows = 2 * da * r
    cols = 2 * da
    eye_rows = np.eye(rows)
    eye_cols = np.eye(cols)
    # Psi M - R Psi = 0 row-vectorizes to (I (x) M^T - R (x) I) vec(Psi) = 0.
    sys_a = np.kron(eye_rows, conj_a.T) - np.kron(act_a, eye_cols)
    sys_co = np.kron(eye_rows, conj_co.T) - np.kron(act_co, eye_cols)
    stacked = np.vstack([sys_a, sys_co])
    null = scipy.linalg.null_space(stacked)
    basis = tuple(
        KernelMap(shape, target, col.reshape(rows, cols))
        for col in null.T
    )
    return KernelSolution(basis, len(basis))


def kernel_constraint_residual(
    psi: KernelMap, a: Coefficient, n: int = 20, seed=0
) -> float:
    """Largest residual of the two intertwining constraints on random inputs."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    space_one = ModuleSpace(psi.shape, 1)
    for _ in range(n):
        b = hb.sample_vector(space_one, rng).coords[0]
        lhs1 = psi(alg.mul(alg.mul(a.value, b), alg.adjoint(a.value)))
        rhs1 = hb.act(a.value, psi(b))
        lhs2 = psi(alg.mul(alg.mul(a.co, b), alg.adjoint(a.co)))
        rhs2 = hb.act(a.co, psi(b))
        worst = max(worst, hb.vec_residual(lhs1, rhs1), hb.vec_residual(lhs2, rhs2))
    return worst
