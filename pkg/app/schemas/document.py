from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel

from app.models.entity import Entity
from app.models.resolution import DischargeStatus, Felicity
from app.models.utterance import Utterance


class Expectation(BaseModel):
    utterance: str
    role: str
    value: Optional[Tuple[str, ...]] = None
    felicity: Optional[Felicity] = None
    discharge: Optional[DischargeStatus] = None
    garden_path: Optional[bool] = None
    weak: Optional[bool] = None

    @property
    def target(self) -> str:
        return f"{self.utterance}.{self.role}"


class DiscourseDocument(BaseModel):
    title: str = ""
    entities: List[Entity] = []
    utterances: List[Utterance] = []
    # Alternative utterances resolved at their base utterance's position.
    variants: List[Utterance] = []
    rule_text: str = ""
    rule_files: List[str] = []
    expectations: List[Expectation] = []

    def entity_ids(self) -> List[str]:
        return [e.id for e in self.entities]

    def variants_of(self, label: str) -> List[Utterance]:
        return [v for v in self.variants if v.variant_of == label]


class ResolveRequest(BaseModel):
    text: str
    rules: Optional[str] = None
    trace: bool = False

    class Config:
        json_schema_extra = {
            "example": {
                "text": "entity John masc sg PERSON\nentity Bill masc sg PERSON\n"
                "rule HIT: hit(X,Y) ~> hurt(Y).\nsynonym hurt injured.\n"
                "utterance U1 pred=hit Subj=John:name Obj=Bill:name\n"
                "utterance U2 pred=injured Subj=?he:pron:masc:sg\n",
                "trace": False,
            }
        }


class AsymmetryRequest(BaseModel):
    text: str
    rules: Optional[str] = None


class AsymmetryPair(BaseModel):
    position: str
    unstressed: str
    stressed: str
    consistent: bool


class AsymmetryResponse(BaseModel):
    consistent: bool
    pairs: List[AsymmetryPair]


class RuleParseRequest(BaseModel):
    text: str


class RuleParseResponse(BaseModel):
    rules: List[str]
    synonyms: Dict[str, List[str]]
    text: str
