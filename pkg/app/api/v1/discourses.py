from typing import Any, Optional

from fastapi import APIRouter, HTTPException, status

from app.api.v1.errors import as_http_error
from app.config import settings
from app.core.exceptions import DiscourseError
from app.engine.focus import check_asymmetry
from app.engine.rule_parser import rule_parser
from app.harness.document import document_parser
from app.harness.report import report_builder
from app.harness.runner import discourse_runner
from app.models.rule import RuleBook
from app.schemas.document import (
    AsymmetryPair,
    AsymmetryRequest,
    AsymmetryResponse,
    ResolveRequest,
)
from app.schemas.report import Report
from app.utilities.logger import logger


class DiscourseRouter:
    def __init__(self):
        self.router = APIRouter()
        self.prefix = "/discourses"
        self.tags = ["discourses"]
        self.singular = "discourse"
        self.plural = "discourses"

        self.router.add_api_route(
            "/resolve",
            self.resolve,
            methods=["POST"],
            response_model=Report,
            status_code=status.HTTP_200_OK,
            summary="Resolve every pronoun of a discourse document",
        )

        self.router.add_api_route(
            "/asymmetry",
            self.asymmetry,
            methods=["POST"],
            response_model=AsymmetryResponse,
            status_code=status.HTTP_200_OK,
            summary="Check stressed/unstressed counterparts for the felicity asymmetry",
            description="""
            A document is consistent unless a stressed pronoun is felicitous
            where its unstressed counterpart at the same position is not.
            Counterparts come from `variant` utterances.
            """,
        )

    @staticmethod
    def rules_for(text: Optional[str]) -> Optional[RuleBook]:
        if text:
            return rule_parser.parse(text, source="<request>")
        if settings.DEFAULT_RULES_FILE:
            return rule_parser.load(settings.DEFAULT_RULES_FILE)
        return None

    async def resolve(self, request: ResolveRequest) -> Any:
        """Parse the document, run it and return the structured report"""
        try:
            document = document_parser.parse(request.text, source="<request>")
            report = discourse_runner.run(document, self.rules_for(request.rules), source="<request>")
        except DiscourseError as exc:
            logger.warning(f"Rejected discourse: {type(exc).__name__}: {exc}")
            raise as_http_error(exc)
        except Exception as e:
            raise HTTPException(
                status_code=status.HTTP_500_INTERNAL_SERVER_ERROR,
                detail=f"Error resolving discourse: {str(e)}",
            )
        return report if request.trace else report_builder.summary(report)

    async def asymmetry(self, request: AsymmetryRequest) -> Any:
        """Resolve the document and pair each base pronoun with its variant counterpart"""
        try:
            document = document_parser.parse(request.text, source="<request>")
            run = discourse_runner.execute(document, self.rules_for(request.rules))
            pairs = [
                AsymmetryPair(
                    position=position,
                    unstressed=unstressed.felicity.value,
                    stressed=stressed.felicity.value,
                    consistent=check_asymmetry([(unstressed, stressed)]),
                )
                for position, unstressed, stressed in discourse_runner.counterpart_positions(run)
            ]
        except DiscourseError as exc:
            logger.warning(f"Rejected discourse: {type(exc).__name__}: {exc}")
            raise as_http_error(exc)
        except Exception as e:
            raise HTTPException(
                status_code=status.HTTP_500_INTERNAL_SERVER_ERROR,
                detail=f"Error checking asymmetry: {str(e)}",
            )
        return {"consistent": all(pair.consistent for pair in pairs), "pairs": pairs}


discourse_router = DiscourseRouter()
