from collections.abc import Sequence
from dataclasses import dataclass
import logging
from typing import final

from .algebra import (
    BilinearMap,
    LeibnizAlgebra,
    LinearOperator,
    RBLeibnizAlgebra,
    Violation,
)
from .cohomology import (
    Cochain,
    CochainSpace,
    ComplexKind,
    cochain_dimension,
    d_matrix,
    delta_matrix,
    is_cocycle,
    rbla_coords,
    same_class,
    split_rbla,
)
from .config import DEFAULT_SETTINGS, Settings
from .linalg import (
    RatMatrix,
    RatVector,
    ShapeError,
    add_vectors,
    is_zero_vector,
    rank,
    solve,
    sub_vectors,
    unit_vector,
    zero_vector,
)
from .representations import self_representation

l = logging.getLogger(__name__)


class InvalidDeformationError(ValueError):
    pass


class DegreeMismatchError(ValueError):
    pass


@final
@dataclass(frozen=True)
class TruncatedDeformation:
    """μ_t = Σ μ_i tⁱ and T_t = Σ T_i tⁱ up to tᴺ, with (μ₀, T₀) the undeformed structure."""

    order: int
    mu: tuple[BilinearMap, ...]
    t: tuple[LinearOperator, ...]

    def __post_init__(self):
        if len(self.mu) != self.order + 1 or len(self.t) != self.order + 1:
            raise ShapeError(f"A deformation of order {self.order} needs {self.order + 1} terms")
        dim = self.mu[0].out_dim
        if any(not b.is_square or b.out_dim != dim for b in self.mu):
            raise ShapeError(f"Every bracket term must map g × g → g with dim g = {dim}")
        if any(op.dim_in != dim or op.dim_out != dim for op in self.t):
            raise ShapeError(f"Every operator term must be {dim}x{dim}")

    @staticmethod
    def new(
        base: RBLeibnizAlgebra,
        mu: Sequence[BilinearMap],
        t: Sequence[LinearOperator],
    ) -> "TruncatedDeformation":
        """`mu` and `t` hold the terms of order 1..N."""
        if len(mu) != len(t):
            raise ShapeError("Bracket and operator term lists have different lengths")
        return TruncatedDeformation(len(mu), (base.bracket, *mu), (base.t, *t))

    @staticmethod
    def constant(base: RBLeibnizAlgebra, order: int) -> "TruncatedDeformation":
        zero_bracket = BilinearMap.zero(base.dim, base.dim, base.dim)
        zero_operator = LinearOperator.zero(base.dim)
        return TruncatedDeformation.new(base, [zero_bracket] * order, [zero_operator] * order)

    @property
    def dim(self) -> int:
        return self.mu[0].out_dim

    @property
    def base(self) -> RBLeibnizAlgebra:
        return RBLeibnizAlgebra.raw(LeibnizAlgebra.raw(self.mu[0]), self.t[0])


@final
@dataclass(frozen=True)
class TruncatedIsomorphism:
    order: int
    psi: tuple[LinearOperator, ...]

    def __post_init__(self):
        if len(self.psi) != self.order + 1:
            raise ShapeError(f"An isomorphism of order {self.order} needs {self.order + 1} terms")
        if self.psi[0].m != RatMatrix.identity(self.psi[0].dim_in):
            raise ValueError("The constant term of a formal isomorphism must be the identity")

    @staticmethod
    def new(dim: int, psi: Sequence[LinearOperator]) -> "TruncatedIsomorphism":
        """`psi` holds the terms of order 1..N."""
        return TruncatedIsomorphism(len(psi), (LinearOperator.identity(dim), *psi))

    @staticmethod
    def identity(dim: int, order: int) -> "TruncatedIsomorphism":
        return TruncatedIsomorphism.new(dim, [LinearOperator.zero(dim)] * order)


@final
@dataclass(frozen=True)
class Infinitesimal:
    degree: int
    mu: Cochain
    t: Cochain

    @property
    def coords(self) -> RatVector:
        return rbla_coords(self.mu, self.t)


@final
@dataclass(frozen=True)
class RigidityCertificate:
    cochain_dim: int
    rank_d1: int
    rank_d2: int


@final
@dataclass(frozen=True)
class Residual:
    """Order N+1 defects of a deformation truncated at N, with the unknown terms set to zero."""

    order: int
    leibniz: Cochain
    rota_baxter: Cochain

    def is_zero(self) -> bool:
        return self.leibniz.is_zero() and self.rota_baxter.is_zero()


def _term[T](terms: Sequence[T], i: int) -> T | None:
    return terms[i] if i < len(terms) else None


def _leibniz_defect(
    mu: Sequence[BilinearMap], n: int, x: RatVector, y: RatVector, z: RatVector
) -> RatVector:
    defect = zero_vector(len(x))
    for i in range(n + 1):
        mu_i, mu_j = _term(mu, i), _term(mu, n - i)
        if mu_i is None or mu_j is None:
            continue
        lhs = mu_i(x, mu_j(y, z))
        rhs = add_vectors(mu_i(mu_j(x, y), z), mu_i(y, mu_j(x, z)))
        defect = add_vectors(defect, sub_vectors(lhs, rhs))
    return defect


def _rota_baxter_defect(
    mu: Sequence[BilinearMap], t: Sequence[LinearOperator], n: int, u: RatVector, v: RatVector
) -> RatVector:
    defect = zero_vector(len(u))
    for i in range(n + 1):
        for j in range(n + 1 - i):
            k = n - i - j
            mu_i, t_i = _term(mu, i), _term(t, i)
            t_j, mu_j = _term(t, j), _term(mu, j)
            t_k = _term(t, k)
            if t_k is None:
                continue
            if mu_i is not None and t_j is not None:
                defect = add_vectors(defect, mu_i(t_j(u), t_k(v)))
            if t_i is not None and mu_j is not None:
                inner = add_vectors(mu_j(t_k(u), v), mu_j(u, t_k(v)))
                defect = sub_vectors(defect, t_i(inner))
    return defect


def check_deformation(d: TruncatedDeformation, up_to: int | None = None) -> list[Violation]:
    up_to = d.order if up_to is None else up_to
    if up_to > d.order:
        raise ValueError(f"Cannot check order {up_to} of a deformation truncated at {d.order}")
    basis = [unit_vector(d.dim, i) for i in range(d.dim)]
    violations: list[Violation] = []
    for n in range(up_to + 1):
        for i, x in enumerate(basis):
            for j, y in enumerate(basis):
                for k, z in enumerate(basis):
                    defect = _leibniz_defect(d.mu, n, x, y, z)
                    if not is_zero_vector(defect):
                        violations.append(Violation("leibniz", (i, j, k), defect, order=n))
        for i, x in enumerate(basis):
            for j, y in enumerate(basis):
                defect = _rota_baxter_defect(d.mu, d.t, n, x, y)
                if not is_zero_vector(defect):
                    violations.append(Violation("rota-baxter", (i, j), defect, order=n))
    return violations


def extension_residual(d: TruncatedDeformation) -> Residual:
    n = d.order + 1
    basis = [unit_vector(d.dim, i) for i in range(d.dim)]
    leibniz = Cochain.from_function(
        CochainSpace(3, d.dim, d.dim),
        lambda multi: _leibniz_defect(d.mu, n, basis[multi[0]], basis[multi[1]], basis[multi[2]]),
    )
    rota_baxter = Cochain.from_function(
        CochainSpace(2, d.dim, d.dim),
        lambda multi: _rota_baxter_defect(d.mu, d.t, n, basis[multi[0]], basis[multi[1]]),
    )
    return Residual(n, leibniz, rota_baxter)


def infinitesimal(d: TruncatedDeformation) -> Infinitesimal | None:
    for n in range(1, d.order + 1):
        if not d.mu[n].is_zero() or not d.t[n].is_zero():
            return Infinitesimal(n, Cochain.from_bilinear(d.mu[n]), Cochain.from_operator(d.t[n]))
    return None


def check_infinitesimal_cocycle(
    d: TruncatedDeformation, settings: Settings = DEFAULT_SETTINGS
) -> bool:
    inf = infinitesimal(d)
    if inf is None:
        return True
    violations = check_deformation(d, inf.degree)
    if violations:
        raise InvalidDeformationError(
            f"Deformation equations fail: {violations[0].describe()}"
        )
    a = d.base
    return is_cocycle(a, self_representation(a), 2, ComplexKind.RBLA, inf.coords, settings)


def _compose_terms(
    left: Sequence[LinearOperator], right: Sequence[LinearOperator], n: int
) -> RatMatrix:
    dim = left[0].dim_out
    total = RatMatrix.zeros(dim, dim)
    for i in range(n + 1):
        total = total + left[i].m @ right[n - i].m
    return total


def check_equivalence(
    d1: TruncatedDeformation,
    d2: TruncatedDeformation,
    iso: TruncatedIsomorphism,
    up_to: int | None = None,
) -> list[Violation]:
    """Violations of ψ_t ∘ μ′_t = μ_t ∘ (ψ_t ⊗ ψ_t) and ψ_t ∘ T′_t = T_t ∘ ψ_t, where
    (μ_t, T_t) = d1 and (μ′_t, T′_t) = d2."""
    up_to = min(d1.order, d2.order, iso.order) if up_to is None else up_to
    if up_to > min(d1.order, d2.order, iso.order):
        raise ValueError(f"Order {up_to} exceeds one of the truncations")
    if d1.dim != d2.dim or iso.psi[0].dim_in != d1.dim:
        raise ShapeError("Deformations and isomorphism live on different dimensions")
    psi, mu, mu_prime = iso.psi, d1.mu, d2.mu
    basis = [unit_vector(d1.dim, i) for i in range(d1.dim)]
    violations: list[Violation] = []
    for n in range(up_to + 1):
        for a, x in enumerate(basis):
            for b, y in enumerate(basis):
                lhs = zero_vector(d1.dim)
                for i in range(n + 1):
                    lhs = add_vectors(lhs, psi[i](mu_prime[n - i](x, y)))
                rhs = zero_vector(d1.dim)
                for i in range(n + 1):
                    for j in range(n + 1 - i):
                        rhs = add_vectors(rhs, mu[i](psi[j](x), psi[n - i - j](y)))
                defect = sub_vectors(lhs, rhs)
                if not is_zero_vector(defect):
                    violations.append(Violation("bracket-equivalence", (a, b), defect, order=n))
        commutator = _compose_terms(psi, d2.t, n) - _compose_terms(d1.t, psi, n)
        for j in range(d1.dim):
            defect = commutator.column(j)
            if not is_zero_vector(defect):
                violations.append(Violation("operator-equivalence", (j,), defect, order=n))
    return violations


def transport_deformation(
    d: TruncatedDeformation, iso: TruncatedIsomorphism
) -> TruncatedDeformation:
    """(μ′_t, T′_t) with ψ_t ∘ μ′_t = μ_t ∘ (ψ_t ⊗ ψ_t) and ψ_t ∘ T′_t = T_t ∘ ψ_t."""
    order = min(d.order, iso.order)
    dim, psi = d.dim, iso.psi
    mu_prime: list[BilinearMap] = []
    t_prime: list[LinearOperator] = []
    for n in range(order + 1):

        def value(a: int, b: int, n: int = n) -> RatVector:
            x, y = unit_vector(dim, a), unit_vector(dim, b)
            out = zero_vector(dim)
            for i in range(n + 1):
                for j in range(n + 1 - i):
                    out = add_vectors(out, d.mu[i](psi[j](x), psi[n - i - j](y)))
            # ψ₀ = id, so μ′_n is what remains after the lower-order ψ_i ∘ μ′_{n-i}.
            for i in range(1, n + 1):
                out = sub_vectors(out, psi[i](mu_prime[n - i].on_basis(a, b)))
            return out

        mu_prime.append(BilinearMap.from_function(dim, dim, dim, value))
        t_n = _compose_terms(d.t, psi, n)
        for i in range(1, n + 1):
            t_n = t_n - psi[i].m @ t_prime[n - i].m
        t_prime.append(LinearOperator.of(t_n))
    return TruncatedDeformation(order, tuple(mu_prime), tuple(t_prime))


def class_of_infinitesimals_equal(
    d1: TruncatedDeformation, d2: TruncatedDeformation, settings: Settings = DEFAULT_SETTINGS
) -> bool:
    if d1.mu[0] != d2.mu[0] or d1.t[0] != d2.t[0]:
        raise ValueError("Deformations of different Rota-Baxter Leibniz algebras")
    inf1, inf2 = infinitesimal(d1), infinitesimal(d2)
    if inf1 is None and inf2 is None:
        return True
    if inf1 is not None and inf2 is not None and inf1.degree != inf2.degree:
        raise DegreeMismatchError(
            f"Infinitesimals have degrees {inf1.degree} and {inf2.degree}"
        )
    a = d1.base
    size = cochain_dimension(ComplexKind.RBLA, a.dim, a.dim, 2)
    z1 = inf1.coords if inf1 is not None else zero_vector(size)
    z2 = inf2.coords if inf2 is not None else zero_vector(size)
    return same_class(a, self_representation(a), 2, ComplexKind.RBLA, z1, z2, settings)


def rigidity_certificate(
    a: RBLeibnizAlgebra, settings: Settings = DEFAULT_SETTINGS
) -> RigidityCertificate | None:
    r = self_representation(a)
    rank_d1 = rank(d_matrix(a, r, 1, settings))
    d2 = d_matrix(a, r, 2, settings)
    rank_d2 = rank(d2)
    h2 = d2.cols - rank_d2 - rank_d1
    l.debug(f"H^2 of the RBLA complex has dimension {h2}")
    if h2 != 0:
        return None
    return RigidityCertificate(d2.cols, rank_d1, rank_d2)


def trivializing_map(
    d: TruncatedDeformation, settings: Settings = DEFAULT_SETTINGS
) -> tuple[int, LinearOperator] | None:
    """(n, ψ) with (μ_n, T_n) = (δ¹ψ, −φ¹ψ) for the n-infinitesimal, if it is a coboundary."""
    inf = infinitesimal(d)
    if inf is None:
        return None
    a = d.base
    r = self_representation(a)
    d1 = d_matrix(a, r, 1, settings)
    solution = solve(d1, inf.coords)
    if solution is None:
        return None
    psi_prime, x = split_rbla(solution, 1, a.dim, a.dim)
    assert x is not None
    # ψ = ψ′ + δ⁰(x) absorbs the degree-0 part, since φ¹δ⁰ = ∂⁰.
    delta_x = delta_matrix(a.alg, r, 0, settings).apply(x.coords)
    psi = Cochain(psi_prime.space, add_vectors(psi_prime.coords, delta_x))
    return inf.degree, psi.to_operator()


def trivialize(
    d: TruncatedDeformation, settings: Settings = DEFAULT_SETTINGS
) -> tuple[TruncatedIsomorphism, TruncatedDeformation] | None:
    """Transport `d` along ψ_t = id − tⁿψ so that its n-infinitesimal vanishes."""
    found = trivializing_map(d, settings)
    if found is None:
        return None
    n, psi = found
    terms = [LinearOperator.zero(d.dim)] * d.order
    terms[n - 1] = -psi
    iso = TruncatedIsomorphism.new(d.dim, terms)
    return iso, transport_deformation(d, iso)


def scaling_deformation(a: RBLeibnizAlgebra, order: int) -> TruncatedDeformation:
    """((1 + t)μ, (1 + t)T), a deformation at every order."""
    if order < 1:
        raise ValueError("Order must be at least 1")
    zero_bracket = BilinearMap.zero(a.dim, a.dim, a.dim)
    zero_operator = LinearOperator.zero(a.dim)
    mu = [a.bracket] + [zero_bracket] * (order - 1)
    t = [a.t] + [zero_operator] * (order - 1)
    return TruncatedDeformation.new(a, mu, t)
