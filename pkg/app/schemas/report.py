from typing import List, Optional

from pydantic import BaseModel, computed_field

from app.models.discourse import Context
from app.models.resolution import UtteranceResolution
from app.models.rule import RuleBook
from app.models.utterance import Utterance
from app.schemas.document import DiscourseDocument


class DiscourseStep(BaseModel):
    utterance: Utterance
    before: Context
    resolution: UtteranceResolution
    after: Context
    # Variants resolved against ``before``; they never feed ``after``.
    variants: List[UtteranceResolution] = []


class DiscourseRun(BaseModel):
    document: DiscourseDocument
    rules: RuleBook
    steps: List[DiscourseStep] = []

    def resolution(self, label: str) -> Optional[UtteranceResolution]:
        for step in self.steps:
            if step.resolution.label == label:
                return step.resolution
            for variant in step.variants:
                if variant.label == label:
                    return variant
        return None


class ContextSnapshot(BaseModel):
    local: List[str]
    salience: List[str]
    center: Optional[str] = None
    chain_length: Optional[int] = None
    transition: Optional[str] = None
    background: List[str] = []
    facts: List[str] = []


class ClassReport(BaseModel):
    preference_class: str
    order: List[str]
    strength: str
    note: str = ""


class DischargeReport(BaseModel):
    status: str
    contrast: Optional[str] = None
    support: Optional[str] = None
    accommodations: List[str] = []


class PronounReport(BaseModel):
    target: str
    role: str
    surface: str
    stressed: bool
    candidates: List[str]
    classes: List[ClassReport]
    base: List[str]
    final: List[str]
    value: List[str]
    weak_pairs: List[str] = []
    garden_path: bool = False
    felicity: str
    discharge: Optional[DischargeReport] = None
    trace: List[str] = []


class ErrorReport(BaseModel):
    target: str
    error: str
    detail: str


class UtteranceReport(BaseModel):
    label: str
    index: int
    variant_of: Optional[str] = None
    segment_initial: bool = False
    registered: str
    pronouns: List[PronounReport] = []
    errors: List[ErrorReport] = []
    trace: List[str] = []
    # Context after the utterance; absent for variants.
    context: Optional[ContextSnapshot] = None


class ExpectationResult(BaseModel):
    target: str
    passed: bool
    failures: List[str] = []


class Report(BaseModel):
    title: str = ""
    source: str = ""
    utterances: List[UtteranceReport] = []
    expectations: List[ExpectationResult] = []
    asymmetry: Optional[bool] = None

    @computed_field
    @property
    def passed(self) -> bool:
        return all(result.passed for result in self.expectations)
