"""Localization packages: question texts, answer display texts, and the
three-level entity descriptions (name, tooltip sentence, long rich text).

Package layout under `languages/<locale>/`:

    model.md          title = first heading, about = remaining body
    nodes/<id>.md     first line = question text, rest = elaboration
    answers.txt       lines `key: display`
    space.md          headings `# <slot-or-value-path>: <name>`; the first
                      paragraph after a heading is the tooltip, the rest is
                      the long text (markup stored verbatim)
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .diagnostics import SourceDiagnostic, SourcePos, error, warning
from .graph import AskNode, DecisionGraph
from .space import AGGREGATE, ATOMIC, PolicySpace


@dataclass
class NodeText:
    text: str
    elaboration: str | None = None


@dataclass
class EntityText:
    name: str | None = None
    tooltip: str | None = None
    long_text: str | None = None


@dataclass
class LocalizationPackage:
    locale: str
    title: str | None = None
    about: str | None = None
    node_texts: dict[str, NodeText] = field(default_factory=dict)
    answers: dict[str, str] = field(default_factory=dict)
    entities: dict[str, EntityText] = field(default_factory=dict)
    ask_coverage: tuple[int, int] = (0, 0)  # (localized ask nodes, total asks)
    entity_coverage: tuple[int, int] = (0, 0)


def model_entity_paths(space: PolicySpace) -> set[str]:
    """Every localizable slot and value path of a space."""
    paths: set[str] = set()

    def walk(name: str, path: str) -> None:
        paths.add(path)
        slot = space.slots[name]
        if slot.kind in (ATOMIC, AGGREGATE):
            for v in slot.values:
                paths.add(f"{path}/{v}")
        for child in slot.children:
            walk(child, f"{path}/{child}")

    walk(space.root, space.root)
    return paths


def answer_keys(graph: DecisionGraph) -> set[str]:
    return {
        a.key
        for n in graph.nodes.values() if isinstance(n, AskNode)
        for a in n.prompt_answers
    }


def load_package(directory: Path, space: PolicySpace,
                 graph: DecisionGraph) -> tuple[LocalizationPackage, list[SourceDiagnostic]]:
    """Load one locale directory; unknown keys are dropped with a warning."""
    directory = Path(directory)
    diags: list[SourceDiagnostic] = []
    package = LocalizationPackage(locale=directory.name)

    model_md = directory / "model.md"
    if model_md.is_file():
        package.title, package.about = _parse_model_md(model_md.read_text(encoding="utf-8"))

    nodes_dir = directory / "nodes"
    if nodes_dir.is_dir():
        for path in sorted(nodes_dir.glob("*.md")):
            node_id = path.stem
            if node_id not in graph.nodes:
                diags.append(warning(
                    f"localization for unknown node '{node_id}' dropped",
                    SourcePos(1, 1, str(path))))
                continue
            lines = path.read_text(encoding="utf-8").splitlines()
            text = lines[0].strip() if lines else ""
            elaboration = "\n".join(lines[1:]).strip() or None
            if not text:
                diags.append(error(
                    f"empty question text for node '{node_id}'", SourcePos(1, 1, str(path))))
                continue
            package.node_texts[node_id] = NodeText(text, elaboration)

    answers_txt = directory / "answers.txt"
    if answers_txt.is_file():
        keys = answer_keys(graph)
        for lineno, line in enumerate(answers_txt.read_text(encoding="utf-8").splitlines(), 1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            if ":" not in stripped:
                diags.append(error(
                    "expected 'key: display text'", SourcePos(lineno, 1, str(answers_txt))))
                continue
            key, display = (part.strip() for part in stripped.split(":", 1))
            if key not in keys:
                diags.append(warning(
                    f"localization for unknown answer key '{key}' dropped",
                    SourcePos(lineno, 1, str(answers_txt))))
                continue
            package.answers[key] = display

    space_md = directory / "space.md"
    if space_md.is_file():
        known = model_entity_paths(space)
        for path_key, entity, pos in _parse_space_md(
                space_md.read_text(encoding="utf-8"), str(space_md)):
            if path_key not in known:
                diags.append(warning(
                    f"localization for unknown entity '{path_key}' dropped", pos))
                continue
            package.entities[path_key] = entity

    asks = [n for n in graph.nodes.values() if isinstance(n, AskNode)]
    package.ask_coverage = (
        sum(1 for n in asks if n.id in package.node_texts), len(asks))
    known = model_entity_paths(space)
    package.entity_coverage = (
        sum(1 for p in known if p in package.entities), len(known))
    return package, diags


def _parse_model_md(text: str) -> tuple[str | None, str | None]:
    title = None
    body_lines = []
    for line in text.splitlines():
        if title is None and line.lstrip().startswith("#"):
            title = line.lstrip().lstrip("#").strip()
            continue
        body_lines.append(line)
    about = "\n".join(body_lines).strip() or None
    return title, about


def _parse_space_md(text: str, file: str):
    """Yield (path, EntityText, pos) per heading block."""
    current: tuple[str, EntityText, SourcePos] | None = None
    block_lines: list[str] = []

    def finish():
        if current is None:
            return None
        path_key, entity, pos = current
        paragraphs = [p.strip() for p in "\n".join(block_lines).split("\n\n") if p.strip()]
        if paragraphs:
            entity.tooltip = paragraphs[0]
        if len(paragraphs) > 1:
            entity.long_text = "\n\n".join(paragraphs[1:])
        return path_key, entity, pos

    for lineno, line in enumerate(text.splitlines(), 1):
        if line.lstrip().startswith("#"):
            done = finish()
            if done:
                yield done
            heading = line.lstrip().lstrip("#").strip()
            if ":" in heading:
                path_key, name = (part.strip() for part in heading.split(":", 1))
            else:
                path_key, name = heading, None
            current = (path_key, EntityText(name=name or None), SourcePos(lineno, 1, file))
            block_lines = []
        else:
            block_lines.append(line)
    done = finish()
    if done:
        yield done


class LocalizationKeyError(KeyError):
    """The requested key does not exist in the model."""


NAME = "name"
TOOLTIP = "tooltip"
LONG = "long"


def localize_node(package: LocalizationPackage | None, graph: DecisionGraph, node_id: str) -> str:
    node = graph.nodes.get(node_id)
    if node is None:
        raise LocalizationKeyError(node_id)
    if package is not None and node_id in package.node_texts:
        return package.node_texts[node_id].text
    if isinstance(node, AskNode):
        return node.text
    title = getattr(node, "title", None)
    return title or node_id


def localize_answer(package: LocalizationPackage | None, graph: DecisionGraph, key: str) -> str:
    if key not in answer_keys(graph):
        raise LocalizationKeyError(key)
    if package is not None and key in package.answers:
        return package.answers[key]
    return key


def localize_entity(package: LocalizationPackage | None, space: PolicySpace,
                    path: str, level: str = NAME) -> str:
    """Fallback chain: package text, then the source remark, then the identifier."""
    if path not in model_entity_paths(space):
        raise LocalizationKeyError(path)
    entity = package.entities.get(path) if package is not None else None
    if entity is not None:
        text = {NAME: entity.name, TOOLTIP: entity.tooltip, LONG: entity.long_text}[level]
        if text:
            return text
    remark = _entity_remark(space, path)
    if remark:
        return remark
    return path.rsplit("/", 1)[-1]


def entity_long_text(package: LocalizationPackage | None, path: str) -> str | None:
    """Long text when actually authored; None otherwise (it may be absent)."""
    if package is None:
        return None
    entity = package.entities.get(path)
    return entity.long_text if entity else None


def _entity_remark(space: PolicySpace, path: str) -> str | None:
    segments = path.split("/")
    tail = segments[-1]
    slot = space.slots.get(tail)
    if slot is not None and space.slot_path(tail) == path:
        return slot.remark
    if len(segments) >= 2:
        parent = space.slots.get(segments[-2])
        if parent is not None:
            return parent.value_remarks.get(tail)
    return None


def negotiate_locale(available: list[str], requested: str | None, default: str | None) -> str | None:
    """Exact tag, then primary-subtag match, then the model default."""
    if not available:
        return None
    if requested:
        if requested in available:
            return requested
        primary = requested.split("-")[0].lower()
        for tag in available:
            if tag.split("-")[0].lower() == primary:
                return tag
    if default and default in available:
        return default
    return None


def default_locale(available: list[str]) -> str | None:
    if not available:
        return None
    if "en" in available:
        return "en"
    return sorted(available)[0]
