"""Worked models bound into deformed families.

Each model knows its ladder operators, which factorization a case deforms,
the closed-form integrating factor and denominator of the Riccati solution,
and which base eigenfunction seeds which deformed eigenfunction. The generic
functions below (``build_family``, ``deformed_eigenfunction``,
``special_state`` ...) only talk to that interface.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np
from scipy.special import erf

from isospec.config import settings
from isospec.errors import ConfigurationError, InvalidArgumentError, UnsupportedError
from isospec.grid import make_uniform_grid
from isospec.models import VerificationReport
from isospec.operators import (
    CaseTag,
    FactorizationScheme,
    FirstOrderOperator,
    SecondOrderOperator,
    annihilation_state,
    compose,
)
from isospec.quadrature import antiderivative, tail_antiderivative
from isospec.riccati import (
    DeformationParameter,
    DeformationResult,
    check_validity,
    deform,
    deformed_factors,
    deformed_operator,
    raise_if_singular,
)
from isospec.smooth import Smooth
from isospec.special import (
    EigenfunctionFamily,
    bessel_family,
    bessel_operator,
    hermite_family,
    oscillator_operator,
    radial_energy,
    radial_family_in_l,
    radial_family_in_n,
    radial_operator,
)

logger = logging.getLogger(__name__)

SQRT2 = np.sqrt(2.0)
HALF_SQRT_PI = 0.5 * np.sqrt(np.pi)


def _over(c: float) -> Smooth:
    """c / x, or the zero function when c = 0."""
    return Smooth.constant(0.0) if c == 0 else Smooth.power(-1.0, scale=float(c))


def _as_indices(indices) -> tuple:
    if indices is None:
        return ()
    if isinstance(indices, (tuple, list)):
        return tuple(indices)
    return (indices,)


class Model(ABC):
    """Behaviour of one solvable model."""

    model_id: str = ""
    cases: tuple = ()
    radial: bool = False
    anchor: float = 0.0
    default_domain: tuple = (-10.0, 10.0)

    def resolve_case(self, case: Optional[str]) -> str:
        if case is None:
            return self.cases[0]
        if case not in self.cases:
            raise InvalidArgumentError(f"model {self.model_id} has cases {', '.join(self.cases)}, not {case!r}")
        return case

    def resolve_member(self, case: str, member: Optional[int]) -> Optional[int]:
        return None

    def scheme_lambda(self, lam: float) -> float:
        return lam

    def scan_domain(self, domain) -> tuple:
        lower, upper = float(domain[0]), float(domain[1])
        if self.radial:
            lower = max(lower, settings.radial_floor)
        return lower, upper

    @abstractmethod
    def scheme(self, case: str, member: Optional[int]) -> FactorizationScheme:
        ...

    @abstractmethod
    def target(self, case: str, member: Optional[int]) -> SecondOrderOperator:
        ...

    @abstractmethod
    def base(self, case: str, member: Optional[int]) -> SecondOrderOperator:
        ...

    @abstractmethod
    def closed_form(self, case: str, member: Optional[int], lam: float, domain) -> tuple:
        """(weight e^G, denominator λ − ∫ e^G / dR) as Smooth functions."""

    @abstractmethod
    def eigenfunctions(self, case: str, member: Optional[int], domain, seed_kind: str) -> EigenfunctionFamily:
        ...

    @abstractmethod
    def seed(self, case: str, member: Optional[int], indices: tuple, domain, seed_kind: str) -> tuple:
        """(seed Smooth, seed eigenvalue under the target operator, canonical indices)."""

    def eigenvalue(self, case: str, member: Optional[int], indices: tuple) -> float:
        raise NotImplementedError

    def supports_special_state(self, case: str) -> bool:
        return False

    def adjoint(self, case: str, member: Optional[int]) -> bool:
        return False

    def ladder_indices(self, case: str, member: Optional[int], levels: int) -> list:
        raise UnsupportedError(f"model {self.model_id} has a continuous spectrum")

    def sample_indices(self, case: str, member: Optional[int], levels: int) -> list:
        """Representative seed indices, continuum models included."""
        return self.ladder_indices(case, member, levels)

    def limiting_term(self, case: str, member: Optional[int], lam: float):
        raise UnsupportedError(f"no small-r leading term is cataloged for {self.model_id} case {case}")

    def validity_note(self, case: str, member: Optional[int]) -> str:
        return "denominator free of zeros on the domain"


class OscillatorModel(Model):
    """H = −½D² + ½x² = b b† − ½ with b = (x + D)/√2, deformed on b†."""

    model_id = "oscillator1d"
    cases = ("unique",)
    default_domain = (-10.0, 10.0)

    def scheme(self, case, member):
        x = Smooth.identity()
        b = FirstOrderOperator.lowering(x / SQRT2, -1.0 / SQRT2, name="b")
        b_dagger = FirstOrderOperator.raising(x / SQRT2, -1.0 / SQRT2, name="b†")
        return FactorizationScheme(b, b_dagger, -0.5, CaseTag.II, k_inverted=0.5, name="oscillator")

    def target(self, case, member):
        return oscillator_operator()

    base = target

    def scheme_lambda(self, lam):
        return SQRT2 * lam

    def closed_form(self, case, member, lam, domain):
        x = Smooth.identity()
        weight = (-(x * x)).exp()
        denominator = Smooth.primitive(lambda t: SQRT2 * (lam + HALF_SQRT_PI * erf(t)), SQRT2 * weight, name="sqrt2*(lambda+J)")
        return weight, denominator

    def eigenfunctions(self, case, member, domain, seed_kind):
        return hermite_family()

    def seed(self, case, member, indices, domain, seed_kind):
        if len(indices) != 1:
            raise InvalidArgumentError("oscillator1d eigenfunctions take one index n")
        n = indices[0]
        if not float(n).is_integer() or n < 1:
            raise InvalidArgumentError(
                f"product-built oscillator states start at n=1 (n=0 is the special state), got {n}"
            )
        n = int(n)
        return hermite_family().smooth(n - 1), n - 0.5, (n,)

    def eigenvalue(self, case, member, indices):
        return indices[0] + 0.5

    def supports_special_state(self, case):
        return True

    def adjoint(self, case, member):
        return True

    def ladder_indices(self, case, member, levels):
        return [(n,) for n in range(1, levels + 1)]

    def validity_note(self, case, member):
        return "|lambda| > sqrt(pi)/2 on the whole line"


class FreeParticleModel(Model):
    """H = −D² = a a† with a = D, a† = −D (``reflected``: a† a)."""

    model_id = "free1d"
    cases = ("unique", "reflected")
    default_domain = (-2.0, 10.0)

    def scheme(self, case, member):
        zero = Smooth.constant(0.0)
        forward = FirstOrderOperator.raising(zero, 1.0, name="a")
        backward = FirstOrderOperator.lowering(zero, 1.0, name="a†")
        if case == "reflected":
            return FactorizationScheme(backward, forward, 0.0, CaseTag.GENERIC, k_inverted=0.0, name="free1d-reflected")
        return FactorizationScheme(forward, backward, 0.0, CaseTag.GENERIC, k_inverted=0.0, name="free1d")

    def target(self, case, member):
        return SecondOrderOperator.schrodinger(0.0, name="H_free")

    base = target

    def closed_form(self, case, member, lam, domain):
        x = Smooth.identity()
        weight = Smooth.constant(1.0)
        return weight, (lam - x if case == "reflected" else lam + x)

    def eigenfunctions(self, case, member, domain, seed_kind):
        x0 = float(domain[0])
        free = self.target(case, member)
        return EigenfunctionFamily(
            "plane_wave",
            0.0,
            np.inf,
            lambda k, x: np.sin(k * (np.asarray(x, dtype=float) - x0)),
            lambda k, x: k * np.cos(k * (np.asarray(x, dtype=float) - x0)),
            f"sin(k(x - {x0:g})), unit amplitude",
            lambda k: (free, k * k),
        )

    def seed(self, case, member, indices, domain, seed_kind):
        if len(indices) != 1 or not indices[0] > 0:
            raise InvalidArgumentError("free1d eigenfunctions take one positive wave number k")
        k = float(indices[0])
        return self.eigenfunctions(case, member, domain, seed_kind).smooth(k), k * k, (k,)

    def eigenvalue(self, case, member, indices):
        return float(indices[0]) ** 2

    def supports_special_state(self, case):
        return True

    def adjoint(self, case, member):
        return True

    def sample_indices(self, case, member, levels):
        return [(0.5 * (i + 1),) for i in range(levels)]

    def validity_note(self, case, member):
        return "singular at x = lambda" if case == "reflected" else "singular at x = -lambda"


class FreeSphericalModel(Model):
    """Radial free particle at unit energy with A⁺_l = l/ρ − D and A⁻_l = (l+1)/ρ + D."""

    model_id = "free3d"
    cases = ("I", "II")
    radial = True
    anchor = 1.0
    default_domain = (0.05, 20.0)

    @staticmethod
    def raising(l):
        return FirstOrderOperator.raising(_over(l), -1.0, index=l, name=f"A+_{l}")

    @staticmethod
    def lowering(l):
        return FirstOrderOperator.lowering(_over(l + 1), -1.0, index=l, name=f"A-_{l}")

    def resolve_member(self, case, member):
        lowest = 0 if case == "I" else 1
        member = lowest if member is None else int(member)
        if not lowest <= member <= 49:
            raise InvalidArgumentError(f"free3d case {case} members run from l={lowest} to 49, got {member}")
        return member

    def scheme(self, case, member):
        l = member
        if case == "I":
            return FactorizationScheme(self.raising(l), self.lowering(l + 1), 0.0, CaseTag.I, k_inverted=0.0,
                                       name=f"free3d-I-{l}")
        return FactorizationScheme(self.lowering(l), self.raising(l - 1), 0.0, CaseTag.II, k_inverted=0.0,
                                   name=f"free3d-II-{l}")

    def target(self, case, member):
        return bessel_operator(member + 1 if case == "I" else member - 1)

    def base(self, case, member):
        return bessel_operator(member)

    def closed_form(self, case, member, lam, domain):
        l = member
        if case == "I":
            weight = Smooth.power(2 * l + 2)
            return weight, lam - Smooth.power(2 * l + 3, scale=1.0 / (2 * l + 3))
        weight = Smooth.power(-2 * l)
        return weight, lam - Smooth.power(1 - 2 * l, scale=1.0 / (2 * l - 1))

    def eigenfunctions(self, case, member, domain, seed_kind):
        return bessel_family(seed_kind)

    def seed(self, case, member, indices, domain, seed_kind):
        l = member if not indices else int(indices[0])
        if l != member:
            raise InvalidArgumentError(f"psi_{l} belongs to member l={l}, this family is member {member}")
        seed_l = l + 1 if case == "I" else l - 1
        return bessel_family(seed_kind).smooth(seed_l), 1.0, (l,)

    def eigenvalue(self, case, member, indices):
        return 1.0

    def supports_special_state(self, case):
        return case == "I"

    def sample_indices(self, case, member, levels):
        return [(member,)]

    def limiting_term(self, case, member, lam):
        l = member
        if case == "II":
            return lambda rho: -(2 * l - 1) / rho
        return lambda rho: rho ** (2 * l + 2) / lam

    def validity_note(self, case, member):
        return "lambda < 0 keeps the whole half line regular"


class IsotropicAngularModel(Model):
    """Radial isotropic oscillator H_l = −D² + r² + l(l+1)/r² with l-ladders

    a⁻_l = l/r + r + D and a⁺_l = (l+1)/r + r − D, so that
    H_l = a⁺_{l−1} a⁻_l − (2l−1) = a⁻_{l+1} a⁺_l − (2l+3).
    """

    model_id = "isotropic-l"
    cases = ("I", "II")
    radial = True
    anchor = 1.0
    default_domain = (0.0, 8.0)

    @staticmethod
    def lowering(l):
        r = Smooth.identity()
        return FirstOrderOperator.lowering(_over(l) + r, -1.0, index=l, name=f"a-_{l}")

    @staticmethod
    def raising(l):
        r = Smooth.identity()
        return FirstOrderOperator.raising(_over(l + 1) + r, -1.0, index=l, name=f"a+_{l}")

    @staticmethod
    def k_direct(l):
        return -(2.0 * l - 1.0)

    @staticmethod
    def k_inverse(l):
        return -(2.0 * l + 3.0)

    def resolve_member(self, case, member):
        member = 0 if member is None else int(member)
        if not 0 <= member <= 48:
            raise InvalidArgumentError(f"isotropic-l members run from l=0 to 48, got {member}")
        return member

    def scheme(self, case, member):
        l = member
        if case == "I":
            return FactorizationScheme(self.raising(l), self.lowering(l + 1), self.k_direct(l + 1), CaseTag.I,
                                       k_inverted=self.k_inverse(l), name=f"isotropic-I-{l}")
        return FactorizationScheme(self.lowering(l), self.raising(l - 1), self.k_inverse(l - 1), CaseTag.II,
                                   k_inverted=self.k_direct(l), name=f"isotropic-II-{l}")

    def target(self, case, member):
        return radial_operator(member + 1 if case == "I" else member - 1)

    def base(self, case, member):
        return radial_operator(member)

    def closed_form(self, case, member, lam, domain):
        l = member
        r = Smooth.identity()
        if case == "I":
            weight = Smooth.power(2 * l + 2) * (r * r).exp()
            return weight, lam - antiderivative(weight, 0.0, name="J")
        weight = Smooth.power(-2 * l) * (-(r * r)).exp()
        return weight, lam - tail_antiderivative(weight, self.anchor, name="T")

    def eigenfunctions(self, case, member, domain, seed_kind):
        return radial_family_in_n(member)

    def seed(self, case, member, indices, domain, seed_kind):
        if len(indices) == 1:
            indices = (indices[0], member)
        if len(indices) != 2:
            raise InvalidArgumentError("isotropic-l eigenfunctions take indices (n, l)")
        n, l = int(indices[0]), int(indices[1])
        if n < 0:
            raise InvalidArgumentError(f"radial quantum number must be non-negative, got {n}")
        if l != member:
            raise InvalidArgumentError(f"psi_(n,{l}) belongs to member l={l}, this family is member {member}")
        seed_l = l + 1 if case == "I" else l - 1
        return radial_family_in_l(n).smooth(seed_l), radial_energy(n, seed_l), (n, l)

    def eigenvalue(self, case, member, indices):
        return radial_energy(int(indices[0]), member)

    def supports_special_state(self, case):
        return case == "I"

    def adjoint(self, case, member):
        return case == "I" or member >= 1

    def ladder_indices(self, case, member, levels):
        return [(n, member) for n in range(levels)]

    def limiting_term(self, case, member, lam):
        l = member
        if case == "II" and l >= 1:
            return lambda r: -(2 * l - 1) / r
        if case == "I":
            return lambda r: r ** (2 * l + 2) / lam
        raise UnsupportedError("the l=0 Case II member has no power-law leading term")

    def validity_note(self, case, member):
        if case == "I":
            return "lambda <= 0"
        return "lambda < 0 or lambda > sqrt(pi)/2" if member == 0 else "lambda < 0"


class IsotropicRadialModel(Model):
    """l = 0 isotropic oscillator with n-ladders

    a⁻_n = n + ½ − r²/2 − (r/2)D, a⁺_n = n + 1 − r²/2 + (r/2)D, and the
    products E_n = a⁻_{n+1} a⁺_n, D_n = a⁺_{n−1} a⁻_n.
    """

    model_id = "isotropic-n"
    cases = ("unique",)
    radial = True
    anchor = 1.0
    default_domain = (0.0, 8.0)

    @staticmethod
    def lowering(n):
        r = Smooth.identity()
        return FirstOrderOperator.lowering(n + 0.5 - 0.5 * r * r, 0.5 * r, index=n, name=f"a-_{n}")

    @staticmethod
    def raising(n):
        r = Smooth.identity()
        return FirstOrderOperator.raising(n + 1.0 - 0.5 * r * r, 0.5 * r, index=n, name=f"a+_{n}")

    def resolve_member(self, case, member):
        member = 0 if member is None else int(member)
        if not 0 <= member <= 59:
            raise InvalidArgumentError(f"isotropic-n members run from n=0 to 59, got {member}")
        return member

    def scheme(self, case, member):
        n = member
        return FactorizationScheme(self.lowering(n + 1), self.raising(n), 0.0, CaseTag.II, k_inverted=0.0,
                                   name=f"isotropic-n-{n}")

    def target(self, case, member):
        return compose(self.lowering(member + 1), self.raising(member))

    def base(self, case, member):
        return compose(self.raising(member), self.lowering(member + 1))

    def closed_form(self, case, member, lam, domain):
        n = member
        r = Smooth.identity()
        gauss = (-(r * r)).exp()
        weight = Smooth.power(4 * n + 5) * gauss
        integrand = Smooth.power(4 * n + 4, scale=2.0) * gauss
        return weight, lam - antiderivative(integrand, 0.0, name="J")

    def eigenfunctions(self, case, member, domain, seed_kind):
        return radial_family_in_n(0)

    def seed(self, case, member, indices, domain, seed_kind):
        n = member if not indices else int(indices[0])
        if n != member:
            raise InvalidArgumentError(f"psi_{n} belongs to member n={n}, this family is member {member}")
        return radial_family_in_n(0).smooth(n), e_constant(n), (n,)

    def eigenvalue(self, case, member, indices):
        return e_constant(member)

    def ladder_indices(self, case, member, levels):
        return [(member,)]

    def validity_note(self, case, member):
        return "lambda < 0"


MODELS = {
    model.model_id: model
    for model in (OscillatorModel(), FreeParticleModel(), FreeSphericalModel(), IsotropicAngularModel(),
                  IsotropicRadialModel())
}


def get_model(model_id: str) -> Model:
    try:
        return MODELS[model_id]
    except KeyError:
        raise InvalidArgumentError(f"unknown model {model_id!r}; choose from {', '.join(MODELS)}") from None


def e_constant(n: int) -> float:
    """e_n = (n+1)(n+3/2)."""
    return (n + 1.0) * (n + 1.5)


def d_constant(n: int) -> float:
    """d_n = n(n+1/2)."""
    return n * (n + 0.5)


@dataclass(frozen=True)
class DeformedFamily:
    """A model deformed at one λ, fully wired.

    ``target_operator`` is what the scheme factors (left·right + k),
    ``base_operator`` the undeformed inverted product and ``deformed_operator``
    the member of the isospectral family.
    """

    model: str
    case: str
    lam: float
    domain: tuple
    member: Optional[int]
    scheme: FactorizationScheme
    deformation: DeformationResult
    target_operator: SecondOrderOperator
    base_operator: SecondOrderOperator
    deformed_operator: SecondOrderOperator
    deformed_left: FirstOrderOperator
    deformed_right: FirstOrderOperator
    eigenfunctions: EigenfunctionFamily
    seed_kind: str = "j"
    validity: str = ""
    _model: Model = field(default=None, repr=False, compare=False)

    @property
    def k1(self) -> float:
        return self.scheme.k

    @property
    def k2(self) -> float:
        return self.scheme.k_inverted

    @property
    def parameter(self) -> DeformationParameter:
        return self.deformation.parameter

    @property
    def scan_domain(self) -> tuple:
        """The domain with radial models kept off the origin."""
        return self._model.scan_domain(self.domain)

    @property
    def radial(self) -> bool:
        return self._model.radial

    @property
    def anchor(self) -> float:
        return self._model.anchor

    @property
    def semi_isospectral(self) -> bool:
        return self.model == "isotropic-n"

    @property
    def label(self) -> str:
        member = "" if self.member is None else f"[{self.member}]"
        return f"{self.model}/{self.case}{member}"

    def seed(self, indices=()) -> tuple:
        return self._model.seed(self.case, self.member, _as_indices(indices), self.domain, self.seed_kind)

    def eigenvalue(self, indices=()) -> float:
        _, _, canonical = self.seed(indices)
        return self._model.eigenvalue(self.case, self.member, canonical)

    def is_adjoint(self) -> bool:
        return self._model.adjoint(self.case, self.member)

    def ladder_indices(self, levels: int) -> list:
        return self._model.ladder_indices(self.case, self.member, levels)

    def sample_indices(self, levels: int) -> list:
        return self._model.sample_indices(self.case, self.member, levels)

    def with_member(self, member: int) -> "DeformedFamily":
        return build_family(self.model, self.case, self.lam, self.domain, member=member, seed_kind=self.seed_kind)


def check_parameter(model: str, case: Optional[str] = None, lam: float = -1.0, domain=None,
                    member: Optional[int] = None, resolution: Optional[int] = None) -> DeformationParameter:
    """Zeros of the deformation denominator for one λ, without building the family."""
    entry = get_model(model)
    case = entry.resolve_case(case)
    member = entry.resolve_member(case, member)
    domain = tuple(domain or entry.default_domain)
    _, denominator = entry.closed_form(case, member, float(lam), domain)
    return check_validity(denominator, entry.scan_domain(domain), float(lam), entry.scheme(case, member).case,
                          resolution)


def scheme_for(model: str, case: Optional[str] = None, member: Optional[int] = None) -> FactorizationScheme:
    entry = get_model(model)
    case = entry.resolve_case(case)
    return entry.scheme(case, entry.resolve_member(case, member))


def build_family(model: str, case: Optional[str] = None, lam: float = -1.0, domain=None,
                 member: Optional[int] = None, seed_kind: str = "j", check: bool = True) -> DeformedFamily:
    """Deform ``model`` at parameter ``lam`` on ``domain``.

    Raises:
        ValidityError: if the denominator vanishes strictly inside the domain
    """
    entry = get_model(model)
    case = entry.resolve_case(case)
    member = entry.resolve_member(case, member)
    domain = tuple(float(v) for v in (domain or entry.default_domain))
    if not domain[0] < domain[1]:
        raise InvalidArgumentError(f"domain must satisfy lower < upper, got {domain}")
    if seed_kind not in ("j", "n"):
        raise InvalidArgumentError(f"seed kind must be 'j' or 'n', got {seed_kind!r}")
    lam = float(lam)
    if not np.isfinite(lam):
        raise InvalidArgumentError("lambda must be finite")

    scheme = entry.scheme(case, member)
    weight, denominator = entry.closed_form(case, member, lam, domain)
    parameter = check_validity(denominator, entry.scan_domain(domain), lam, scheme.case)
    raise_if_singular(parameter, f"{model}/{case}")
    result = replace(deform(scheme, entry.scheme_lambda(lam), weight, denominator, scheme.case), parameter=parameter)
    left, right = deformed_factors(scheme, result)
    base = entry.base(case, member)
    family = DeformedFamily(
        model=model,
        case=case,
        lam=lam,
        domain=domain,
        member=member,
        scheme=scheme,
        deformation=result,
        target_operator=entry.target(case, member),
        base_operator=base,
        deformed_operator=deformed_operator(base, result),
        deformed_left=left,
        deformed_right=right,
        eigenfunctions=entry.eigenfunctions(case, member, domain, seed_kind),
        seed_kind=seed_kind,
        validity=entry.validity_note(case, member),
        _model=entry,
    )
    if check:
        _check_wiring(family)
    logger.info(f"built {family.label} at lambda={lam:g} on [{domain[0]:g}, {domain[1]:g}]")
    return family


def _check_wiring(family: DeformedFamily, points: int = 201):
    """Deformed factors must reproduce the target and the deformed operator."""
    lower, upper = family._model.scan_domain(family.domain)
    x = make_uniform_grid(lower, upper, points).points[1:-1]
    pairs = (
        (compose(family.deformed_left, family.deformed_right).shifted(family.k1), family.target_operator),
        (compose(family.deformed_right, family.deformed_left).shifted(family.k2), family.deformed_operator),
    )
    for composed, expected in pairs:
        for coefficient in ("P", "Q", "R"):
            got = getattr(composed, coefficient)(x)
            want = getattr(expected, coefficient)(x)
            scale = 1.0 + np.max(np.abs(want))
            deviation = np.max(np.abs(got - want)) / scale
            if not deviation <= 1e-8:
                raise ConfigurationError(
                    f"{family.label}: deformed factors do not reproduce {expected.name} "
                    f"(coefficient {coefficient}, relative deviation {deviation:.3g})"
                )


def deformed_eigenfunction(family: DeformedFamily, indices=()) -> Smooth:
    """ψ = (deformed right factor) applied to the seed eigenfunction."""
    seed, _, canonical = family.seed(indices)
    psi = family.deformed_right.act(seed)
    psi.name = f"psi{list(canonical)}"
    return psi


def special_state(family: DeformedFamily) -> Smooth:
    """State annihilated by the deformed left factor, eigenvalue k2 of the family operator."""
    if not family._model.supports_special_state(family.case):
        raise UnsupportedError(f"{family.label} has no annihilation state")
    chi = annihilation_state(family.deformed_left, origin=family.anchor)
    chi.name = "chi"
    return chi


def special_eigenvalue(family: DeformedFamily) -> float:
    return family.k2


def ladder_spectrum(family: DeformedFamily, levels: int) -> list:
    """Eigenvalues of the product-built states, lowest first."""
    return sorted(family.eigenvalue(indices) for indices in family.ladder_indices(levels))


def _gap_report(entry: Model, case: str, member, indices: tuple, tol: float) -> VerificationReport:
    scheme = entry.scheme(case, member)
    _, seed_value, canonical = entry.seed(case, member, indices, entry.default_domain, "j")
    gap = entry.eigenvalue(case, member, canonical) - seed_value
    expected = scheme.k_inverted - scheme.k
    label = entry.model_id + "/" + case + ("" if member is None else f"[{member}]")
    return VerificationReport.judge(
        f"gap:{label}:{list(canonical)}",
        {"gap": gap, "k2_minus_k1": expected},
        tol,
        [gap - expected],
        provenance="eigenvalue gap between partner states equals the difference of factorization constants",
    )


def spectrum_gap_check(family: DeformedFamily, indices=(), tol: float = 1e-12) -> VerificationReport:
    """ψ's eigenvalue minus its seed's must equal k2 − k1."""
    return _gap_report(family._model, family.case, family.member, _as_indices(indices), tol)


def spectrum_gaps(model: str, member: Optional[int] = None, case: Optional[str] = None, levels: int = 3,
                  tol: float = 1e-12) -> list:
    """Gap reports for the first ``levels`` states of a model member, no deformation needed."""
    entry = get_model(model)
    case = entry.resolve_case(case)
    member = entry.resolve_member(case, member)
    return [_gap_report(entry, case, member, indices, tol) for indices in entry.sample_indices(case, member, levels)]


def limiting_form(family: DeformedFamily, points) -> tuple:
    """(numeric ν, analytic leading term) at small ``points``."""
    leading = family._model.limiting_term(family.case, family.member, family.lam)
    points = np.asarray(points, dtype=float)
    return family.deformation.nu(points), leading(points)


@dataclass(frozen=True)
class ConjugatePair:
    n: int
    E: SecondOrderOperator
    D: SecondOrderOperator
    E_closed: SecondOrderOperator
    D_closed: SecondOrderOperator
    e: float
    d: float

    def agreement(self, points) -> float:
        deviations = []
        for composed, closed in ((self.E, self.E_closed), (self.D, self.D_closed)):
            for coefficient in ("P", "Q", "R"):
                deviations.append(np.max(np.abs(getattr(composed, coefficient)(points)
                                                - getattr(closed, coefficient)(points))))
        return float(max(deviations))


def _shifted_oscillator(n: int, constant: float) -> SecondOrderOperator:
    """(r²/4)[H₀ − ε_{n0}] + constant."""
    r = Smooth.identity()
    quarter = 0.25 * r * r
    h0 = radial_operator(0)
    return SecondOrderOperator(quarter * h0.P, quarter * h0.Q, quarter * (h0.R - radial_energy(n, 0)) + constant,
                               index=n)


def conjugate_pair(model: str, n: int) -> ConjugatePair:
    """E_n = a⁻_{n+1} a⁺_n and D_n = a⁺_{n−1} a⁻_n, composed and in closed form."""
    if model != "isotropic-n":
        raise UnsupportedError(f"conjugate pairs are cataloged for isotropic-n only, not {model}")
    if n < 0:
        raise InvalidArgumentError(f"n must be non-negative, got {n}")
    ladder = IsotropicRadialModel
    E = compose(ladder.lowering(n + 1), ladder.raising(n))
    D = compose(ladder.raising(n - 1), ladder.lowering(n))
    e, d = e_constant(n), d_constant(n)
    return ConjugatePair(n, E, D, _shifted_oscillator(n, e), _shifted_oscillator(n, d), e, d)


def semi_isospectral_operator(family: DeformedFamily) -> SecondOrderOperator:
    """H₀ + (4/r²)·V for the isotropic-n family, V the deformation potential."""
    if not family.semi_isospectral:
        raise UnsupportedError(f"{family.label} is not a semi-isospectral family")
    potential = family.deformation.potential_change * Smooth.power(-2.0, scale=4.0)
    return radial_operator(0).with_potential(potential, name=f"H^lambda_{family.member + 1}")


def semi_isospectral_eigenvalue(family: DeformedFamily) -> float:
    return radial_energy(family.member + 1, 0)
