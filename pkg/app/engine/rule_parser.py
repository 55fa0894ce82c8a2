from pathlib import Path
from typing import List, Optional, Union

from lark import Lark, Token, Tree
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, UnexpectedToken

from app.core.exceptions import DslSyntaxError, DuplicateRuleId
from app.models.rule import Atom, DefeasibleRule, RuleBook, RuleKind, is_variable
from app.utilities.logger import AppLogger

logger = AppLogger.get_logger("rules")

RULE_GRAMMAR = r"""
    start:      _item*
    _item:      rule | synonym
    rule:       "rule" RULE_ID kind? ":" atom "~>" atom "."
    kind:       "[" LOWER "]"
    synonym:    "synonym" LOWER LOWER+ "."
    atom:       LOWER "(" _terms? ")"
    _terms:     term ("," term)*
    term:       VAR | LOWER

    RULE_ID:    /[A-Z][A-Za-z0-9_-]*/
    VAR:        /[A-Z][A-Za-z0-9_]*/
    LOWER:      /[a-z][a-z0-9_]*/
    COMMENT:    /#[^\n]*/

    %import common.WS
    %ignore WS
    %ignore COMMENT
"""

parser = Lark(RULE_GRAMMAR, parser="lalr")


def _describe(exc: UnexpectedInput) -> str:
    if isinstance(exc, UnexpectedToken):
        if exc.token.type == "$END":
            return "unexpected end of input"
        return f"unexpected '{exc.token}'"
    if isinstance(exc, UnexpectedCharacters):
        return f"unexpected character '{exc.char}'"
    if isinstance(exc, UnexpectedEOF):
        return "unexpected end of input"
    return str(exc).splitlines()[0]


class RuleParser:
    """Parser and printer for the defeasible rule DSL."""

    def parse(self, text: str, source: str = "<input>") -> RuleBook:
        """
        Parse rule-DSL text into a RuleBook.

        Raises:
            DslSyntaxError: malformed input, an unknown rule kind or an
                unbound consequent variable, positioned at the offending token.
            DuplicateRuleId: the same rule id is declared twice.
        """
        try:
            tree = parser.parse(text)
        except UnexpectedInput as exc:
            raise DslSyntaxError(_describe(exc), exc.line, exc.column, source)

        book = RuleBook()
        for item in tree.children:
            if item.data == "rule":
                rule = self._rule(item, source)
                if book.get(rule.id) is not None:
                    raise DuplicateRuleId(f"{source}: rule {rule.id} is declared twice")
                book = book.with_rule(rule)
            else:
                head, *others = [token.value for token in item.children]
                book = book.with_synonyms(head, others)

        logger.debug(f"Parsed {len(book.rules)} rules and {len(book.synonyms)} synonyms from {source}")
        return book

    def load(self, path: Union[str, Path]) -> RuleBook:
        path = Path(path)
        return self.parse(path.read_text(encoding="utf-8"), source=str(path))

    def load_all(self, paths: List[Union[str, Path]], base: Optional[RuleBook] = None) -> RuleBook:
        book = base or RuleBook()
        for path in paths:
            book = book.merge(self.load(path))
        return book

    def render(self, book: RuleBook) -> str:
        lines = [str(rule) for rule in book.rules]
        for canonical, predicates in book.synonym_groups().items():
            lines.append(f"synonym {canonical} {' '.join(predicates)}.")
        return "\n".join(lines) + ("\n" if lines else "")

    def _rule(self, tree: Tree, source: str) -> DefeasibleRule:
        rule_id, *kind_trees, antecedent_tree, consequent_tree = tree.children
        kind = RuleKind.CAUSAL
        for kind_tree in kind_trees:
            token = kind_tree.children[0]
            try:
                kind = RuleKind(token.value)
            except ValueError:
                raise DslSyntaxError(f"unknown rule kind '{token}'", token.line, token.column, source)

        antecedent = self._atom(antecedent_tree)
        consequent, tokens = self._atom(consequent_tree), self._terms(consequent_tree)
        for token in tokens:
            if is_variable(token.value) and token.value not in antecedent.variables():
                raise DslSyntaxError(
                    f"variable {token} in rule {rule_id} is not bound by the antecedent",
                    token.line,
                    token.column,
                    source,
                )
        return DefeasibleRule(
            id=rule_id.value, antecedent=antecedent, consequent=consequent, kind=kind
        )

    @staticmethod
    def _terms(tree: Tree) -> List[Token]:
        return [term.children[0] for term in tree.children[1:]]

    def _atom(self, tree: Tree) -> Atom:
        predicate = tree.children[0].value
        return Atom(predicate=predicate, terms=tuple(t.value for t in self._terms(tree)))


rule_parser = RuleParser()
