"""
Analysis reports

An AnalysisReport is what both engines return. It renders to text for the
terminal and to JSON for scripts; from_json reads the JSON back.
"""

import json
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, FrozenSet, List, Optional

from apps.systems.types import VERDICTS, AugmentedModel

STATUS_FISPO = 'fispo'
STATUS_DEFICIENT = 'deficient'
STATUS_INCONCLUSIVE = 'inconclusive'

CERTIFIED = 'certified-at-point'
PROBABILISTIC = 'probabilistic'

# Exit code per status
EXIT_CODES = {STATUS_FISPO: 0, STATUS_DEFICIENT: 1, STATUS_INCONCLUSIVE: 2}


@dataclass(frozen=True)
class Verdict:
    name: str
    tag: str
    verdict: str
    confidence: str

    @property
    def recovered(self) -> bool:
        return self.verdict in {recovered for recovered, _ in VERDICTS.values()}


def build_verdicts(augmented: AugmentedModel, deficient: FrozenSet[int], confidence: str) -> List[Verdict]:
    """
    One verdict per augmented component, worded after its tag
    """
    verdicts = []
    for index, component in enumerate(augmented.components):
        recovered, missing = VERDICTS[component.tag]
        verdicts.append(Verdict(
            name=component.label,
            tag=component.tag_name,
            verdict=missing if index in deficient else recovered,
            confidence=confidence,
        ))
    return verdicts


@dataclass
class AnalysisReport:
    model_id: str
    algorithm: str
    status: str
    stop_reason: str
    verdicts: List[Verdict] = field(default_factory=list)
    rank: Optional[int] = None
    dimension: int = 0
    transcendence_degree: Optional[int] = None
    lie_orders: Optional[int] = None
    truncation_order: Optional[int] = None
    seed: int = 0
    prime: int = 0
    retries: int = 0
    confirmation_prime: Optional[int] = None
    caveats: List[str] = field(default_factory=list)
    duration: float = 0.0

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]

    @property
    def deficient(self) -> List[str]:
        return [v.name for v in self.verdicts if not v.recovered]

    @property
    def recovered(self) -> List[str]:
        return [v.name for v in self.verdicts if v.recovered]

    def deficient_counts(self) -> Dict[str, int]:
        """Deficient components per kind: state, parameter, input"""
        counts: Dict[str, int] = {}
        for v in self.verdicts:
            if not v.recovered:
                kind = 'input' if v.tag.startswith('input') else v.tag
                counts[kind] = counts.get(kind, 0) + 1
        return counts

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'AnalysisReport':
        data = dict(data)
        data['verdicts'] = [Verdict(**v) for v in data.get('verdicts', [])]
        data['caveats'] = list(data.get('caveats', []))
        return cls(**data)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_json(cls, text: str) -> 'AnalysisReport':
        return cls.from_dict(json.loads(text))

    def render_text(self) -> str:
        lines = [
            f"model:      {self.model_id}",
            f"algorithm:  {self.algorithm}",
            f"status:     {self.status} ({self.stop_reason})",
        ]
        if self.rank is not None:
            lines.append(f"rank:       {self.rank} of {self.dimension} "
                         f"(transcendence degree {self.transcendence_degree})")
        if self.lie_orders is not None:
            lines.append(f"lie orders: {self.lie_orders}")
        if self.truncation_order is not None:
            lines.append(f"truncation: {self.truncation_order}")
        lines.append(f"seed:       {self.seed}  prime: {self.prime}  retries: {self.retries}")
        if self.confirmation_prime is not None:
            lines.append(f"confirmed:  seed {self.seed + 1}  prime: {self.confirmation_prime}")
        lines.append(f"duration:   {self.duration:.3f}s")
        if self.verdicts:
            width = max(len(v.name) for v in self.verdicts)
            lines.append('verdicts:')
            for v in self.verdicts:
                lines.append(f"  {v.name:<{width}}  {v.verdict:<20} {v.tag} [{v.confidence}]")
        for caveat in self.caveats:
            lines.append(f"caveat: {caveat}")
        return '\n'.join(lines) + '\n'
