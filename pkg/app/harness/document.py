"""Line-oriented discourse documents: parsing, rendering and loading."""

import re
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from pydantic import ValidationError

from app.core.exceptions import BadAgreement, DslSyntaxError, DuplicateRuleId, UndeclaredEntity
from app.engine.rule_parser import rule_parser
from app.models.entity import Entity, Gender, GrammaticalNumber, Sort
from app.models.mention import Agreement, GrammaticalFunction, Mention, MentionKind
from app.models.resolution import DischargeStatus, Felicity
from app.models.utterance import LogicalForm, Polarity, Utterance
from app.schemas.document import DiscourseDocument, Expectation
from app.utilities.logger import AppLogger

logger = AppLogger.get_logger("document")

TOKEN = re.compile(r"\S+")
ROLE = re.compile(r"[A-Za-z][A-Za-z0-9_]*")

Token = Tuple[str, int]

NP_KINDS = {
    "name": MentionKind.DEFINITE,
    "def": MentionKind.DEFINITE,
    "indef": MentionKind.INDEFINITE,
}
PRONOUN_KINDS = {"pron": MentionKind.PRONOUN, "zero": MentionKind.ZERO}
BOOLEANS = {"true": True, "false": False}


class _DocumentState:
    def __init__(self, source: str):
        self.source = source
        self.title = ""
        self.entities: Dict[str, Entity] = {}
        self.utterances: List[Utterance] = []
        self.variants: List[Utterance] = []
        self.labels: Dict[str, Utterance] = {}
        self.rule_lines: List[str] = []
        self.rule_ids: set = set()
        self.rule_files: List[str] = []
        self.expectations: List[Expectation] = []
        self.segment_pending = False
        self.line = 0

    def error(self, detail: str, column: int = 1) -> DslSyntaxError:
        return DslSyntaxError(detail, self.line, column, self.source)

    def where(self, column: int) -> str:
        return f"{self.source}:{self.line}:{column}"


class DocumentParser:
    def parse(self, text: str, source: str = "<input>") -> DiscourseDocument:
        """
        Parse a discourse document.

        Raises:
            DslSyntaxError: malformed line, or a document without utterances.
            UndeclaredEntity: an entity is used before its ``entity`` line.
            BadAgreement: invalid gender, number or person features.
        """
        state = _DocumentState(source)
        for number, raw in enumerate(text.splitlines(), start=1):
            state.line = number
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            tokens = [(m.group(), m.start() + 1) for m in TOKEN.finditer(raw)]
            keyword = tokens[0][0]
            if keyword == "title":
                state.title = line[len("title") :].strip()
            elif keyword == "entity":
                self._entity(state, tokens)
            elif keyword in ("utterance", "variant"):
                self._utterance(state, tokens)
            elif keyword == "segment":
                if len(tokens) > 1:
                    raise state.error("segment takes no arguments", tokens[1][1])
                state.segment_pending = True
            elif keyword == "rules":
                if len(tokens) != 2:
                    raise state.error("rules takes one path", tokens[0][1])
                state.rule_files.append(tokens[1][0])
            elif keyword in ("rule", "synonym"):
                self._rule_line(state, raw)
            elif keyword == "expect":
                self._expect(state, tokens)
            else:
                raise state.error(f"unknown directive '{keyword}'", tokens[0][1])

        if not state.utterances:
            state.line = max(state.line, 1)
            raise state.error("document has no utterances")

        return DiscourseDocument(
            title=state.title,
            entities=list(state.entities.values()),
            utterances=state.utterances,
            variants=state.variants,
            rule_text="\n".join(state.rule_lines),
            rule_files=state.rule_files,
            expectations=state.expectations,
        )

    def load(self, path: Union[str, Path]) -> DiscourseDocument:
        path = Path(path)
        text = path.read_text(encoding="utf-8")
        if path.suffix == ".json":
            return self.parse_json(text, source=str(path))
        return self.parse(text, source=str(path))

    def parse_json(self, text: str, source: str = "<input>") -> DiscourseDocument:
        """
        Load the JSON mirror of a document and hold it to the same
        declaration rules as the line format. Errors carry no line grid, so
        they point at line 1 and name the offending field instead.
        """
        try:
            document = DiscourseDocument.model_validate_json(text)
        except ValidationError as exc:
            error = exc.errors()[0]
            where = ".".join(str(part) for part in error["loc"])
            detail = f"{where}: {error['msg']}" if where else error["msg"]
            raise DslSyntaxError(detail, 1, 1, source)
        self.check_declarations(document, source)
        return document

    def check_declarations(self, document: DiscourseDocument, source: str = "<input>") -> None:
        if not document.utterances:
            raise DslSyntaxError("document has no utterances", 1, 1, source)

        declared: Dict[str, Entity] = {}
        for entity in document.entities:
            if entity.id in declared:
                raise DslSyntaxError(f"entity {entity.id} declared twice", 1, 1, source)
            for member in entity.members:
                if member not in declared:
                    raise UndeclaredEntity(f"{source}: member {member} of {entity.id} is not declared")
            declared[entity.id] = entity

        labels = set()
        for utterance in document.utterances + document.variants:
            if utterance.label in labels:
                raise DslSyntaxError(f"utterance {utterance.label} declared twice", 1, 1, source)
            if utterance.variant_of is not None and utterance.variant_of not in labels:
                raise DslSyntaxError(f"variant of unknown utterance {utterance.variant_of}", 1, 1, source)
            labels.add(utterance.label)
            for _, mention in utterance.lf.args:
                for entity_id in mention.conjuncts + ((mention.referent,) if mention.referent else ()):
                    if entity_id not in declared:
                        raise UndeclaredEntity(f"{source}: entity {entity_id} in {utterance.label} is not declared")

        for expectation in document.expectations:
            if expectation.utterance not in labels:
                raise DslSyntaxError(f"expectation on unknown utterance {expectation.utterance}", 1, 1, source)
            for entity_id in expectation.value or ():
                if entity_id not in declared:
                    raise UndeclaredEntity(f"{source}: entity {entity_id} in {expectation.target} is not declared")

        if document.rule_text:
            rule_parser.parse(document.rule_text, source=source)

    def render(self, document: DiscourseDocument) -> str:
        lines: List[str] = []
        if document.title:
            lines.append(f"title {document.title}")
        lines.extend(f"rules {path}" for path in document.rule_files)
        lines.extend(line for line in document.rule_text.splitlines() if line.strip())
        lines.extend(self._render_entity(e) for e in document.entities)
        for utterance in document.utterances:
            if utterance.segment_initial:
                lines.append("segment")
            lines.append(self._render_utterance(utterance))
            lines.extend(self._render_utterance(v) for v in document.variants_of(utterance.label))
        lines.extend(self._render_expectation(e) for e in document.expectations)
        return "\n".join(lines) + "\n"

    def _entity(self, state: _DocumentState, tokens: List[Token]) -> None:
        if len(tokens) < 5:
            raise state.error("entity needs: <Id> <gender> <number> <SORT>", tokens[0][1])
        (entity_id, _), (gender, gcol), (number, ncol), (sort, scol) = tokens[1:5]
        if entity_id in state.entities:
            raise state.error(f"entity {entity_id} declared twice", tokens[1][1])
        fields = {
            "id": entity_id,
            "gender": self._gender(state, gender, gcol),
            "number": self._number(state, number, ncol),
        }
        try:
            fields["sort"] = Sort(sort)
        except ValueError:
            raise state.error(f"unknown sort '{sort}'", scol)

        for option, column in tokens[5:]:
            key, sep, value = option.partition("=")
            if not sep:
                raise state.error(f"expected key=value, got '{option}'", column)
            if key == "person":
                fields["person"] = self._person(state, value, column)
            elif key == "name":
                fields["name"] = value
            elif key == "members":
                members = tuple(value.split(","))
                for member in members:
                    if member not in state.entities:
                        raise UndeclaredEntity(f"{state.where(column)}: member {member} is not declared")
                fields["members"] = members
            else:
                raise state.error(f"unknown entity option '{key}'", column)
        try:
            state.entities[entity_id] = Entity(**fields)
        except ValidationError as exc:
            raise state.error(self._first_error(exc), tokens[1][1])

    def _utterance(self, state: _DocumentState, tokens: List[Token]) -> None:
        keyword = tokens[0][0]
        if len(tokens) < 2:
            raise state.error(f"{keyword} needs a label", tokens[0][1])
        label, label_col = tokens[1]
        if label in state.labels:
            raise state.error(f"utterance {label} declared twice", label_col)
        rest = tokens[2:]

        base: Optional[Utterance] = None
        if keyword == "variant":
            if len(rest) < 2 or rest[0][0] != "of":
                raise state.error("variant needs 'of <Label>'", label_col)
            base_label, base_col = rest[1]
            base = next((u for u in state.utterances if u.label == base_label), None)
            if base is None:
                raise state.error(f"variant of unknown utterance {base_label}", base_col)
            rest = rest[2:]

        predicate, polarity, relation = None, Polarity.POS, None
        args: List[Tuple[str, Mention]] = []
        for token, column in rest:
            if token == "neg":
                polarity = Polarity.NEG
                continue
            key, sep, value = token.partition("=")
            if not sep:
                raise state.error(f"unexpected '{token}'", column)
            if key == "pred":
                predicate = value
            elif key == "relation":
                relation = value
            elif ROLE.fullmatch(key):
                if any(role == key for role, _ in args):
                    raise state.error(f"role {key} given twice", column)
                args.append((key, self._mention(state, key, value, column + len(key) + 1)))
            else:
                raise state.error(f"bad role '{key}'", column)
        if not predicate:
            raise state.error(f"{keyword} {label} has no pred=", label_col)

        try:
            lf = LogicalForm(predicate=predicate, args=tuple(args), polarity=polarity)
        except ValidationError as exc:
            raise state.error(self._first_error(exc), label_col)

        if base is None:
            utterance = Utterance(
                index=len(state.utterances) + 1,
                label=label,
                lf=lf,
                segment_initial=state.segment_pending,
                relation=relation,
            )
            state.segment_pending = False
            state.utterances.append(utterance)
        else:
            utterance = Utterance(
                index=base.index,
                label=label,
                lf=lf,
                segment_initial=base.segment_initial,
                relation=relation,
                variant_of=base.label,
            )
            state.variants.append(utterance)
        state.labels[label] = utterance

    def _mention(self, state: _DocumentState, role: str, spec: str, column: int) -> Mention:
        gf = GrammaticalFunction.from_role(role)
        if spec.startswith("?"):
            return self._pronoun(state, gf, spec, column)

        ids, sep, kind = spec.rpartition(":")
        if not sep or kind not in NP_KINDS:
            raise state.error(f"mention '{spec}' needs :name, :def or :indef", column)
        conjuncts: Tuple[str, ...] = ()
        if "+" in ids:
            conjuncts = tuple(ids.split("+"))
            for conjunct in conjuncts:
                self._declared(state, conjunct, column)
            if ids not in state.entities:
                state.entities[ids] = Entity(
                    id=ids,
                    sort=Sort.GROUP,
                    gender=Gender.UNKNOWN,
                    number=GrammaticalNumber.PL,
                    members=conjuncts,
                )
        entity = self._declared(state, ids, column)
        return Mention(
            surface=ids,
            kind=NP_KINDS[kind],
            gf=gf,
            agreement=Agreement(gender=entity.gender, number=entity.number, person=entity.person),
            referent=ids,
            conjuncts=conjuncts,
        )

    def _pronoun(self, state: _DocumentState, gf: GrammaticalFunction, spec: str, column: int) -> Mention:
        parts = spec[1:].split(":")
        if len(parts) < 4 or parts[1] not in PRONOUN_KINDS:
            raise state.error(f"pronoun '{spec}' needs ?<surface>:pron|zero:<gender>:<number>", column)
        surface, kind, gender, number = parts[:4]
        person, stressed = 3, False
        for extra in parts[4:]:
            if extra == "stressed":
                stressed = True
            elif extra.startswith("p"):
                person = self._person(state, extra[1:], column)
            else:
                raise state.error(f"unknown pronoun feature '{extra}'", column)
        agreement = Agreement(
            gender=self._gender(state, gender, column),
            number=self._number(state, number, column),
            person=person,
        )
        try:
            return Mention(
                surface=surface,
                kind=PRONOUN_KINDS[kind],
                stressed=stressed,
                gf=gf,
                agreement=agreement,
            )
        except ValidationError as exc:
            raise state.error(self._first_error(exc), column)

    def _rule_line(self, state: _DocumentState, raw: str) -> None:
        try:
            book = rule_parser.parse(raw, source=state.source)
        except DslSyntaxError as exc:
            raise DslSyntaxError(exc.detail, state.line, exc.column, state.source)
        for rule_id in book.ids():
            if rule_id in state.rule_ids:
                raise DuplicateRuleId(f"{state.where(1)}: rule {rule_id} is declared twice")
            state.rule_ids.add(rule_id)
        state.rule_lines.append(raw.strip())

    def _expect(self, state: _DocumentState, tokens: List[Token]) -> None:
        if len(tokens) < 2 or "." not in tokens[1][0]:
            raise state.error("expect needs <Label>.<Role>", tokens[0][1])
        target, target_col = tokens[1]
        label, _, role = target.partition(".")
        if label not in state.labels:
            raise state.error(f"expectation on unknown utterance {label}", target_col)
        fields: Dict[str, object] = {"utterance": label, "role": role}
        rest = tokens[2:]
        if rest and rest[0][0] == "=":
            if len(rest) < 2:
                raise state.error("expected value after '='", rest[0][1])
            values, value_col = rest[1]
            for value in values.split(","):
                self._declared(state, value, value_col)
            fields["value"] = tuple(sorted(values.split(",")))
            rest = rest[2:]
        for option, column in rest:
            key, sep, value = option.partition("=")
            try:
                if key == "felicity":
                    fields["felicity"] = Felicity(value)
                elif key == "discharge":
                    fields["discharge"] = DischargeStatus(value)
                elif key in ("garden-path", "weak"):
                    fields[key.replace("-", "_")] = BOOLEANS[value]
                else:
                    raise state.error(f"unknown expectation '{option}'", column)
            except (ValueError, KeyError):
                raise state.error(f"bad value in '{option}'", column)
        state.expectations.append(Expectation(**fields))

    @staticmethod
    def _declared(state: _DocumentState, entity_id: str, column: int) -> Entity:
        try:
            return state.entities[entity_id]
        except KeyError:
            raise UndeclaredEntity(f"{state.where(column)}: entity {entity_id} is not declared")

    @staticmethod
    def _gender(state: _DocumentState, value: str, column: int) -> Gender:
        try:
            return Gender(value)
        except ValueError:
            raise BadAgreement(f"{state.where(column)}: unknown gender '{value}'")

    @staticmethod
    def _number(state: _DocumentState, value: str, column: int) -> GrammaticalNumber:
        try:
            return GrammaticalNumber(value)
        except ValueError:
            raise BadAgreement(f"{state.where(column)}: unknown number '{value}'")

    @staticmethod
    def _person(state: _DocumentState, value: str, column: int) -> int:
        if value not in ("1", "2", "3"):
            raise BadAgreement(f"{state.where(column)}: person must be 1, 2 or 3, got '{value}'")
        return int(value)

    @staticmethod
    def _first_error(exc: ValidationError) -> str:
        return exc.errors()[0]["msg"]

    @staticmethod
    def _render_entity(entity: Entity) -> str:
        line = f"entity {entity.id} {entity.gender.value} {entity.number.value} {entity.sort.value}"
        if entity.person != 3:
            line += f" person={entity.person}"
        if entity.name:
            line += f" name={entity.name}"
        if entity.members:
            line += f" members={','.join(entity.members)}"
        return line

    @staticmethod
    def _render_mention(mention: Mention) -> str:
        if mention.pronominal:
            kind = "zero" if mention.kind == MentionKind.ZERO else "pron"
            spec = f"?{mention.surface}:{kind}:{mention.agreement.gender.value}:{mention.agreement.number.value}"
            if mention.agreement.person != 3:
                spec += f":p{mention.agreement.person}"
            if mention.stressed:
                spec += ":stressed"
            return spec
        kind = "indef" if mention.kind == MentionKind.INDEFINITE else "def"
        return f"{mention.referent}:{kind}"

    def _render_utterance(self, utterance: Utterance) -> str:
        if utterance.variant_of:
            line = f"variant {utterance.label} of {utterance.variant_of}"
        else:
            line = f"utterance {utterance.label}"
        line += f" pred={utterance.lf.predicate}"
        if utterance.lf.polarity == Polarity.NEG:
            line += " neg"
        if utterance.relation:
            line += f" relation={utterance.relation}"
        for role, mention in utterance.lf.args:
            line += f" {role}={self._render_mention(mention)}"
        return line

    @staticmethod
    def _render_expectation(expectation: Expectation) -> str:
        line = f"expect {expectation.target}"
        if expectation.value is not None:
            line += f" = {','.join(expectation.value)}"
        if expectation.felicity is not None:
            line += f" felicity={expectation.felicity.value}"
        if expectation.discharge is not None:
            line += f" discharge={expectation.discharge.value}"
        if expectation.garden_path is not None:
            line += f" garden-path={str(expectation.garden_path).lower()}"
        if expectation.weak is not None:
            line += f" weak={str(expectation.weak).lower()}"
        return line


document_parser = DocumentParser()
