from typing import Any

from fastapi import APIRouter, status

from app.api.v1.errors import as_http_error
from app.core.exceptions import DiscourseError
from app.engine.rule_parser import rule_parser
from app.schemas.document import RuleParseRequest, RuleParseResponse


class RuleRouter:
    def __init__(self):
        self.router = APIRouter()
        self.prefix = "/rules"
        self.tags = ["rules"]

        self.router.add_api_route(
            "/parse",
            self.parse,
            methods=["POST"],
            response_model=RuleParseResponse,
            status_code=status.HTTP_200_OK,
            summary="Parse rule DSL and render it canonically",
        )

    async def parse(self, request: RuleParseRequest) -> Any:
        try:
            book = rule_parser.parse(request.text, source="<request>")
        except DiscourseError as exc:
            raise as_http_error(exc)
        return {
            "rules": [str(rule) for rule in book.rules],
            "synonyms": book.synonym_groups(),
            "text": rule_parser.render(book),
        }


rule_router = RuleRouter()
