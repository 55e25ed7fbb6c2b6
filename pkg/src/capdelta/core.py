"""Capability taxonomy, quantification scale, agent profiles and resources.

Capabilities are identified by dotted IMBA-style ids (complex, top-level,
optional detailed level) and quantified on an ordinal range ``0..q_max``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from numbers import Real
from typing import Iterable, Iterator, Mapping, Optional, Union


class CapabilityIdError(ValueError):
    """Raised for malformed capability id text."""


class UnknownCapabilityError(KeyError):
    """Raised when an id is not part of the taxonomy in use."""

    def __str__(self) -> str:
        return f"unknown capability {self.args[0]}"


class DomainError(ValueError):
    """Raised for inputs outside a function's domain (NaN, infinities)."""


class OutOfRangeError(ValueError):
    """Raised when a quantified value lies outside ``[0, q_max]``."""


def to_fraction(value: Union[int, float, str, Fraction]) -> Fraction:
    """Exact rational for ``value``; floats are read by their shortest repr."""
    if isinstance(value, float):
        if not math.isfinite(value):
            raise DomainError(f"non-finite value {value!r}")
        return Fraction(repr(value))
    return Fraction(value)


@dataclass(frozen=True)
class QuantScale:
    q_max: int = 5

    def __post_init__(self):
        if isinstance(self.q_max, bool) or not isinstance(self.q_max, int) or self.q_max < 1:
            raise ValueError(f"q_max must be a positive integer, got {self.q_max!r}")

    def contains(self, value: int) -> bool:
        return 0 <= value <= self.q_max

    def check(self, value: int, what: str = "value") -> int:
        if isinstance(value, bool) or not isinstance(value, int) or not self.contains(value):
            raise OutOfRangeError(f"{what} {value!r} outside [0, {self.q_max}]")
        return value

    def clamp(self, value: int) -> int:
        return max(0, min(value, self.q_max))

    @property
    def values(self) -> range:
        return range(self.q_max + 1)


DEFAULT_SCALE = QuantScale(5)


@dataclass(frozen=True)
class CapabilityId:
    complex: int
    top_level: int
    detailed: Optional[int] = None

    def __post_init__(self):
        if not 1 <= self.complex <= 9:
            raise CapabilityIdError(f"complex {self.complex} outside 1-9")
        if self.top_level < 1:
            raise CapabilityIdError(f"top-level {self.top_level} must be >= 1")
        if self.detailed is not None and self.detailed < 1:
            raise CapabilityIdError(f"detailed level {self.detailed} must be >= 1")

    @classmethod
    def parse(cls, text: str) -> "CapabilityId":
        return parse_capability_id(text)

    @property
    def sort_key(self) -> tuple[int, int, int]:
        return (self.complex, self.top_level, self.detailed or 0)

    def __lt__(self, other: "CapabilityId") -> bool:
        if not isinstance(other, CapabilityId):
            return NotImplemented
        return self.sort_key < other.sort_key

    def __str__(self) -> str:
        text = f"{self.complex}.{self.top_level:02d}"
        if self.detailed is not None:
            text += f".{self.detailed:02d}"
        return text

    def __repr__(self) -> str:
        return f"CapabilityId('{self}')"


CapLike = Union[CapabilityId, str]


def parse_capability_id(text: str) -> CapabilityId:
    """Parse ``"3.02"`` or ``"1.03.01"`` into a :class:`CapabilityId`."""
    if isinstance(text, CapabilityId):
        return text
    if not isinstance(text, str):
        raise CapabilityIdError(f"capability id must be text, got {text!r}")
    groups = text.strip().split(".")
    if len(groups) < 2:
        raise CapabilityIdError(f"capability id {text!r} needs at least 2 groups")
    if len(groups) > 3:
        raise CapabilityIdError(
            f"capability id {text!r} has too many groups (offending token {groups[3]!r})"
        )
    numbers = []
    for token in groups:
        if not token.isdigit() or not token.isascii():
            raise CapabilityIdError(f"capability id {text!r}: bad token {token!r}")
        numbers.append(int(token))
    complex_, top = numbers[0], numbers[1]
    if not 1 <= complex_ <= 9:
        raise CapabilityIdError(f"capability id {text!r}: complex {groups[0]!r} outside 1-9")
    if top < 1:
        raise CapabilityIdError(f"capability id {text!r}: top-level {groups[1]!r} must be >= 1")
    detailed = numbers[2] if len(numbers) == 3 else None
    if detailed is not None and detailed < 1:
        raise CapabilityIdError(f"capability id {text!r}: detailed {groups[2]!r} must be >= 1")
    return CapabilityId(complex_, top, detailed)


def as_id(value: CapLike) -> CapabilityId:
    return value if isinstance(value, CapabilityId) else parse_capability_id(value)


@dataclass(frozen=True)
class CapabilityDef:
    id: CapabilityId
    name: str
    complex_name: str
    definition: str = ""
    summativity_default: str = "non_summative"


@dataclass(frozen=True)
class Taxonomy:
    """Ordered capability definitions; positions form the index set 1..n."""

    defs: tuple[CapabilityDef, ...]
    index: Mapping[CapabilityId, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        index: dict[CapabilityId, int] = {}
        for pos, d in enumerate(self.defs, start=1):
            if d.id in index:
                raise ValueError(f"duplicate capability id {d.id}")
            index[d.id] = pos
        object.__setattr__(self, "index", index)

    def __contains__(self, cid: object) -> bool:
        try:
            return as_id(cid) in self.index  # type: ignore[arg-type]
        except CapabilityIdError:
            return False

    def __getitem__(self, cid: CapLike) -> CapabilityDef:
        key = as_id(cid)
        if key not in self.index:
            raise UnknownCapabilityError(str(key))
        return self.defs[self.index[key] - 1]

    def get(self, cid: CapLike) -> Optional[CapabilityDef]:
        try:
            return self[cid]
        except (UnknownCapabilityError, CapabilityIdError):
            return None

    def __iter__(self) -> Iterator[CapabilityDef]:
        return iter(self.defs)

    def __len__(self) -> int:
        return len(self.defs)

    def position(self, cid: CapLike) -> int:
        self[cid]
        return self.index[as_id(cid)]


_BODY_POSTURE = "Body Posture"
_BODY_PART = "Body Part Movement"
_COMPLEX_CHARS = "Complex Characteristics"
_KEY_QUAL = "Key Qualification"

_IMBA_SUBSET = (
    ("1.03.01", "Kneeling", _BODY_POSTURE, "Being able to adopt and maintain a kneeling posture"),
    (
        "1.05",
        "Bent Over/Stooped",
        _BODY_POSTURE,
        "Being able to adopt and maintain a posture with a bent upper body "
        "(up to 30° bent over, more than 30° stooped posture)",
    ),
    ("3.01", "Head/Neck", _BODY_PART, "Being able to perform movements of the head/neck"),
    ("3.01.01", "Head/Neck Rotation", _BODY_PART, "Being able to rotate the head and neck"),
    ("3.02", "Trunk", _BODY_PART, "Being able to perform movements of the trunk"),
    ("3.02.01", "Rotation While Sitting", _BODY_PART, "Being able to rotate the trunk while sitting"),
    ("3.02.02", "Rotation While Standing", _BODY_PART, "Being able to rotate the trunk while standing"),
    (
        "3.03",
        "Arm",
        _BODY_PART,
        "Being able to perform all movement and strength-related activities "
        "that require the use of both or one arm(s)",
    ),
    ("3.03.07", "Backward Reach", _BODY_PART, "Being able to reach backwards"),
    ("3.03.08", "Backward Reach", _BODY_PART, "Being able to reach backwards"),
    ("3.04", "Hand/Finger", _BODY_PART, "Being able to perform activities with the hands and fingers"),
    ("3.05", "Leg/Foot", _BODY_PART, "Being able to perform activities with the legs and feet"),
    ("5.01", "Lifting", _COMPLEX_CHARS, "Being able to lift loads"),
    (
        "9.05",
        "Stamina",
        _KEY_QUAL,
        "Being able to work continuously on the tasks associated with the "
        "activity without interruption",
    ),
)

SUMMATIVE_BY_DEFAULT = frozenset({CapabilityId(5, 1)})


def builtin_imba_subset() -> Taxonomy:
    """Top-level capabilities of the IMBA subset plus the named detailed ids."""
    defs = []
    for text, name, complex_name, definition in _IMBA_SUBSET:
        cid = parse_capability_id(text)
        kind = "summative" if cid in SUMMATIVE_BY_DEFAULT else "non_summative"
        defs.append(CapabilityDef(cid, name, complex_name, definition, kind))
    return Taxonomy(tuple(defs))


BUILTIN_TAXONOMY = builtin_imba_subset()


class ScaleKind(enum.Enum):
    LINEAR = "linear"
    QUADRATIC = "quadratic"


@dataclass(frozen=True)
class DiscretizerSpec:
    kind: ScaleKind
    width: Fraction
    scale: QuantScale = DEFAULT_SCALE

    def __post_init__(self):
        width = to_fraction(self.width)
        if width <= 0:
            raise ValueError(f"category width must be > 0, got {self.width!r}")
        object.__setattr__(self, "width", width)


def discretize(quantity: Real, spec: DiscretizerSpec) -> int:
    """Map a real-world magnitude onto the quantification range."""
    if isinstance(quantity, float) and not math.isfinite(quantity):
        raise DomainError(f"non-finite quantity {quantity!r}")
    ratio = abs(to_fraction(quantity)) / spec.width
    if spec.kind is ScaleKind.LINEAR:
        level = math.floor(ratio)
    else:
        # floor(sqrt(x)) == isqrt(floor(x)) for x >= 0
        level = math.isqrt(math.floor(ratio))
    return spec.scale.clamp(level)


class AgentKind(enum.Enum):
    HUMAN = "human"
    AUTONOMOUS = "autonomous"


@dataclass(frozen=True)
class ResourceState:
    actuation: Mapping[str, bool] = field(default_factory=dict)
    mental_stamina: Fraction = Fraction(1)
    environmental: Mapping[str, bool] = field(default_factory=dict)
    societal: Mapping[str, bool] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "mental_stamina", to_fraction(self.mental_stamina))

    def available(self, name: str) -> bool:
        for pool in (self.actuation, self.environmental, self.societal):
            if name in pool:
                return bool(pool[name])
        return False

    def with_stamina(self, stamina: Fraction) -> "ResourceState":
        return replace(self, mental_stamina=Fraction(stamina))


@dataclass(frozen=True)
class AgentProfile:
    agent_id: str
    kind: AgentKind
    capacities: Mapping[CapabilityId, int]
    resources: ResourceState = field(default_factory=ResourceState)
    scale: QuantScale = DEFAULT_SCALE

    def capacity(self, cid: CapLike) -> int:
        return self.capacities.get(as_id(cid), 0)

    def with_capacities(self, capacities: Mapping[CapabilityId, int]) -> "AgentProfile":
        return replace(self, capacities=dict(capacities))

    @property
    def is_human(self) -> bool:
        return self.kind is AgentKind.HUMAN


PerformanceAssignment = Mapping[CapabilityId, int]


def effective_capacity(
    profile: AgentProfile,
    cid: CapLike,
    required: Iterable[str] = (),
    taxonomy: Optional[Taxonomy] = None,
) -> int:
    """Capacity usable right now: zero when a required resource is missing,
    otherwise the capacity scaled down by mental stamina (floored)."""
    taxonomy = taxonomy or BUILTIN_TAXONOMY
    key = as_id(cid)
    if key not in taxonomy:
        raise UnknownCapabilityError(str(key))
    if any(not profile.resources.available(name) for name in required):
        return 0
    return math.floor(profile.capacity(key) * profile.resources.mental_stamina)


def effective_profile(
    profile: AgentProfile,
    required: Iterable[str] = (),
    taxonomy: Optional[Taxonomy] = None,
) -> AgentProfile:
    """Profile whose capacities are replaced by effective capacities."""
    required = tuple(required)
    caps = {cid: effective_capacity(profile, cid, required, taxonomy) for cid in profile.capacities}
    return profile.with_capacities(caps)


@dataclass(frozen=True)
class Violation:
    capability: Optional[str]
    message: str

    def __str__(self) -> str:
        return f"{self.capability}: {self.message}" if self.capability else self.message


def check_performance(performance: PerformanceAssignment, profile: AgentProfile) -> list[Violation]:
    """Performance may never exceed capacity (nor drop below zero)."""
    out = []
    for cid, value in sorted(performance.items()):
        if value < 0 or value > profile.capacity(cid):
            out.append(Violation(str(cid), f"performance {value} outside [0, {profile.capacity(cid)}]"))
    return out


def validate_profile(
    profile: AgentProfile,
    taxonomy: Optional[Taxonomy] = None,
    scale: Optional[QuantScale] = None,
) -> list[Violation]:
    taxonomy = taxonomy or BUILTIN_TAXONOMY
    scale = scale or profile.scale
    report = []
    for cid, value in sorted(profile.capacities.items()):
        if cid not in taxonomy:
            report.append(Violation(str(cid), "unknown capability"))
        if isinstance(value, bool) or not isinstance(value, int) or not scale.contains(value):
            report.append(Violation(str(cid), f"value out of range: {value!r} not in [0, {scale.q_max}]"))
    stamina = profile.resources.mental_stamina
    if not 0 <= stamina <= 1:
        report.append(Violation(None, f"mental_stamina {float(stamina)} outside [0, 1]"))
    return report
