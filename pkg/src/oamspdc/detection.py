"""Joint detection probabilities for the hologram-plus-fiber analyzer.

For the ``(l, -l)`` pair the signal arm carries a ``-l`` hologram and the
idler arm a ``+l`` hologram; ``l = 0`` has no hologram in either arm. Each
arm ends in a mono-mode fiber. The probability is summed over the radial
indices of the pair and over the radial content of the converted beams.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, replace
from typing import Iterable, Mapping, Sequence

from . import serialize
from .errors import DomainError
from .fiber import FiberSpec, relative_q_vector
from .hologram import ConversionTable, conversion_table, identity_table
from .numerics import QuadratureSpec
from .spdc import amplitude_closed_form


@dataclass(frozen=True)
class DetectionConfig:
    """Truncations and idealizations of the joint-probability sum.

    Parameters
    ----------
    p_pair_max : int
        largest ``p1``, ``p2`` of the down-converted pair
    p_out_cap : int or None
        largest converted radial index; ``None`` means ``p_in + 1``
    restrict_p_to_zero : bool
        keep only ``p1 = p2 = 0``
    ideal_elements : bool
        replace holograms by the identity and every fiber efficiency by 1
    hologram_charges : mapping, optional
        ``l -> (signal delta_l, idler delta_l)``; default ``(-l, +l)``

    """

    p_pair_max: int = 2
    p_out_cap: int | None = None
    restrict_p_to_zero: bool = False
    ideal_elements: bool = False
    hologram_charges: Mapping[int, tuple[int, int]] = field(default_factory=dict)

    def __post_init__(self):
        if self.p_pair_max < 0:
            raise DomainError(f"p_pair_max must be non-negative, got {self.p_pair_max}")
        if self.p_out_cap is not None and self.p_out_cap < 0:
            raise DomainError(f"p_out_cap must be non-negative, got {self.p_out_cap}")

    def pair_range(self) -> range:
        return range(1) if self.restrict_p_to_zero else range(self.p_pair_max + 1)

    def out_range(self, p_in: int) -> range:
        top = p_in + 1 if self.p_out_cap is None else self.p_out_cap
        return range(top + 1)

    def charges(self, l: int) -> tuple[int, int]:
        return tuple(self.hologram_charges.get(l, (-l, l)))

    @property
    def p_out_max(self) -> int:
        if self.p_out_cap is not None:
            return self.p_out_cap
        return max(self.pair_range()) + 1

    def echo(self) -> dict:
        doc = asdict(self)
        doc["hologram_charges"] = {str(k): list(v) for k, v in self.hologram_charges.items()}
        return doc


@dataclass(frozen=True)
class DetectionReport:
    """``R_l`` per winding number and the ratios ``R_l / R_0``."""

    per_l: Mapping[int, float]
    ls: tuple[int, ...]
    ratios: tuple[float, ...]
    config: DetectionConfig

    columns = ("l", "probability", "ratio", "ratio_display")

    def rows(self):
        for l, r in zip(self.ls, self.ratios):
            yield {"l": l, "probability": self.per_l[l], "ratio": r,
                   "ratio_display": serialize.display(r)}

    def to_csv(self) -> str:
        return serialize.to_csv(self.rows(), self.columns)

    def to_json(self) -> str:
        return serialize.to_json({"config": self.config.echo()}, self.rows(),
                                 per_l={str(l): self.per_l[l] for l in self.ls},
                                 ratios=list(self.ratios))


class ElementModel:
    """Hologram tables and fiber efficiencies needed by one configuration.

    Tables are computed on first use unless supplied; supplying ``tables``
    restricts the model to the hologram charges it contains.
    """

    def __init__(self, config: DetectionConfig, fiber: FiberSpec | None = None,
                 tables: Mapping[int, ConversionTable] | None = None,
                 q_vector: Sequence[float] | None = None,
                 quadrature: QuadratureSpec | None = None):
        self.config = config
        self.quadrature = quadrature
        self._fixed_tables = tables is not None
        self._tables = dict(tables or {})
        p_in_max = max(config.pair_range())
        self._identity = identity_table(p_in_max, config.p_out_max)
        if config.ideal_elements:
            self.q = (1.0,) * (config.p_out_max + 1)
        elif q_vector is not None:
            if len(q_vector) < config.p_out_max + 1:
                raise DomainError(f"need {config.p_out_max + 1} fiber efficiencies, got {len(q_vector)}")
            self.q = tuple(q_vector)
        else:
            self.q = relative_q_vector(config.p_out_max, fiber or FiberSpec(2.0), quadrature)

    def table(self, delta_l: int) -> ConversionTable:
        if delta_l == 0 or self.config.ideal_elements:
            return self._identity
        if delta_l not in self._tables:
            if self._fixed_tables:
                raise DomainError(f"no conversion table for delta_l = {delta_l}")
            self._tables[delta_l] = conversion_table(
                delta_l, max(self.config.pair_range()), self.config.p_out_max,
                quadrature=self.quadrature)
        return self._tables[delta_l]


def joint_probability(l: int, config: DetectionConfig | None = None,
                      model: ElementModel | None = None) -> float:
    """Relative joint detection probability ``R_l`` of the ``(l, -l)`` pair.

    Parameters
    ----------
    l : int
        signal winding number
    config : DetectionConfig, optional
        truncations; defaults reproduce ``p1, p2 <= 2`` and ``p_out <= p_in + 1``
    model : ElementModel, optional
        precomputed element data to reuse across calls

    Returns
    -------
    float
        ``sum C^2 * sum P_signal P_idler Q Q`` over the configured ranges

    """
    config = config or DetectionConfig()
    model = model or ElementModel(config)
    signal_dl, idler_dl = config.charges(l)
    signal, idler = model.table(signal_dl), model.table(idler_dl)
    q = model.q
    total = []
    for p1 in config.pair_range():
        for p2 in config.pair_range():
            c = amplitude_closed_form(l, p1, -l, p2, 0)
            arms = math.fsum(signal[p1, a] * idler[p2, b] * q[a] * q[b]
                             for a in config.out_range(p1)
                             for b in config.out_range(p2))
            total.append(c * c * arms)
    return math.fsum(total)


def joint_probability_p0(l: int, config: DetectionConfig | None = None,
                         model: ElementModel | None = None) -> float:
    """``R_l`` with the pair restricted to ``p1 = p2 = 0``."""
    config = replace(config or DetectionConfig(), restrict_p_to_zero=True)
    if model is not None and not model.config.restrict_p_to_zero:
        model = None
    return joint_probability(l, config, model)


def detection_report(ls: Iterable[int] = (0, 1, 2),
                     config: DetectionConfig | None = None,
                     model: ElementModel | None = None) -> DetectionReport:
    """``R_l`` for each ``l`` and the ratios to ``R_0``."""
    config = config or DetectionConfig()
    model = model or ElementModel(config)
    ls = tuple(ls)
    per_l = {l: joint_probability(l, config, model) for l in set(ls) | {0}}
    r0 = per_l[0]
    return DetectionReport(per_l, ls, tuple(per_l[l] / r0 for l in ls), config)


@dataclass(frozen=True)
class ComparisonReport:
    """Measured state amplitudes squared and normalized beside the model."""

    ls: tuple[int, ...]
    amplitudes: tuple[float, ...]
    experiment: tuple[float, ...]
    model: tuple[float, ...]
    config: DetectionConfig

    columns = ("l", "amplitude", "experiment_ratio", "model_ratio",
               "experiment_display", "model_display")

    def rows(self):
        for l, a, e, m in zip(self.ls, self.amplitudes, self.experiment, self.model):
            yield {"l": l, "amplitude": a, "experiment_ratio": e, "model_ratio": m,
                   "experiment_display": serialize.display(e),
                   "model_display": serialize.display(m)}

    def to_csv(self) -> str:
        return serialize.to_csv(self.rows(), self.columns)

    def to_json(self) -> str:
        return serialize.to_json({"config": self.config.echo()}, self.rows())


def compare_experiment(amplitudes: Sequence[tuple[int, float]],
                       config: DetectionConfig | None = None,
                       model: ElementModel | None = None) -> ComparisonReport:
    """Ratios ``|c_l / c_0|^2`` of a measured state next to ``R_l / R_0``.

    The measured amplitudes are not renormalized to unit norm; only the
    ``l = 0`` term fixes the scale.
    """
    amplitudes = [(int(l), float(a)) for l, a in amplitudes]
    if not amplitudes:
        raise DomainError("no state amplitudes given")
    anchor = dict(amplitudes).get(0)
    if anchor is None:
        raise DomainError("state has no l = 0 anchor term")
    if anchor == 0:
        raise DomainError("the l = 0 anchor amplitude is zero")
    ls = tuple(l for l, _ in amplitudes)
    report = detection_report(ls, config, model)
    experiment = tuple((a / anchor) ** 2 for _, a in amplitudes)
    return ComparisonReport(ls, tuple(a for _, a in amplitudes), experiment,
                            report.ratios, report.config)
