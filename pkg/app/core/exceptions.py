from typing import Optional


class DiscourseError(Exception):
    """Base class for every error raised while processing a discourse."""

    detail = "Discourse processing failed"

    def __init__(self, detail: Optional[str] = None):
        if detail is not None:
            self.detail = detail
        super().__init__(self.detail)


class CycleError(DiscourseError):
    detail = "Pair would create a cycle in the order"


class UnknownEntity(DiscourseError):
    detail = "Entity is not in the carrier"


class EmptyCarrier(DiscourseError):
    detail = "Order has an empty carrier"


class NotASubset(DiscourseError):
    detail = "Subset is not contained in the carrier"


class UnresolvedMention(DiscourseError):
    detail = "Mention has no referent"


class EmptyLocalState(DiscourseError):
    detail = "Local attentional state is empty"


class NoCandidates(DiscourseError):
    detail = "No entity in the local attentional state agrees with the pronoun"


class DuplicateRuleId(DiscourseError):
    detail = "Rule id declared twice"


class UndeclaredEntity(DiscourseError):
    detail = "Entity used before it was declared"


class BadAgreement(DiscourseError):
    detail = "Invalid agreement features"


class CarrierTooLarge(DiscourseError):
    detail = "Carrier exceeds the oracle limit"


class DslSyntaxError(DiscourseError):
    """Positioned syntax error in a rule file or a discourse document."""

    detail = "Syntax error"

    def __init__(
        self,
        detail: Optional[str] = None,
        line: int = 0,
        column: int = 0,
        source: str = "<input>",
    ):
        self.line = line
        self.column = column
        self.source = source
        super().__init__(detail)

    def __str__(self) -> str:
        return f"{self.source}:{self.line}:{self.column}: {self.detail}"
