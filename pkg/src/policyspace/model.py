"""Model bundle: manifest, parsed artifacts, and aggregated diagnostics."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from . import graph as graph_ir
from .diagnostics import ParseError, SourceDiagnostic, SourcePos, error
from .graph import DecisionGraph
from .inference import BoundInferencer, ValueInferencer, bind
from .localization import LocalizationPackage, default_locale, load_package
from .parsers.graph_parser import parse_decision_graph
from .parsers.inferencer_parser import parse_value_inferencers
from .parsers.space_parser import parse_policy_space
from .space import PolicySpace

MANIFEST_NAME = "policy-model.json"


class ManifestError(ValueError):
    """The manifest file is missing or structurally unusable."""


@dataclass
class ModelManifest:
    id: str
    title: str
    version: str
    space: str
    graphs: list[str]
    inferencers: list[str] = field(default_factory=list)
    languages: str | None = None

    @classmethod
    def from_file(cls, path: Path) -> "ModelManifest":
        path = Path(path)
        if not path.is_file():
            raise ManifestError(f"manifest not found: {path}")
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ManifestError(f"{path}: invalid JSON: {exc}") from exc
        return cls.from_dict(data, path)

    @classmethod
    def from_dict(cls, data: dict, path: Path | str = MANIFEST_NAME) -> "ModelManifest":
        for key in ("id", "space", "graphs"):
            if key not in data:
                raise ManifestError(f"{path}: manifest is missing required field '{key}'")
        graphs = data["graphs"]
        if not isinstance(graphs, list) or not graphs:
            raise ManifestError(f"{path}: 'graphs' must be a non-empty list")
        return cls(
            id=str(data["id"]),
            title=str(data.get("title", data["id"])),
            version=str(data.get("version", "1")),
            space=str(data["space"]),
            graphs=[str(g) for g in graphs],
            inferencers=[str(i) for i in data.get("inferencers", [])],
            languages=data.get("languages"),
        )

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "title": self.title,
            "version": self.version,
            "space": self.space,
            "graphs": list(self.graphs),
            "inferencers": list(self.inferencers),
            "languages": self.languages,
        }


class PolicyModel:
    """A loaded model; `diagnostics` holds every parse and validation finding."""

    def __init__(self, manifest: ModelManifest, space: PolicySpace | None,
                 graph: DecisionGraph | None,
                 inferencers: list[ValueInferencer],
                 localizations: dict[str, LocalizationPackage],
                 diagnostics: list[SourceDiagnostic]):
        self.manifest = manifest
        self.space = space
        self.graph = graph
        self.inferencers = inferencers
        self.bound_inferencers: list[BoundInferencer] = []
        self.localizations = localizations
        self.diagnostics = diagnostics
        if space is not None and graph is not None:
            self.diagnostics.extend(graph_ir.validate(graph, space))
            for inf in inferencers:
                bound, diags = bind(inf, space)
                self.diagnostics.extend(diags)
                if bound is not None:
                    self.bound_inferencers.append(bound)

    @property
    def id(self) -> str:
        return self.manifest.id

    @property
    def version(self) -> str:
        return self.manifest.version

    @property
    def errors(self) -> list[SourceDiagnostic]:
        return [d for d in self.diagnostics if d.is_error()]

    @property
    def is_valid(self) -> bool:
        return self.space is not None and self.graph is not None and not self.errors

    @property
    def locales(self) -> list[str]:
        return sorted(self.localizations)

    @property
    def default_locale(self) -> str | None:
        return default_locale(self.locales)

    def package(self, locale: str | None) -> LocalizationPackage | None:
        if locale is None:
            return None
        return self.localizations.get(locale)

    @classmethod
    def load(cls, directory: Path | str) -> "PolicyModel":
        directory = Path(directory)
        manifest_path = directory / MANIFEST_NAME if directory.is_dir() else directory
        manifest = ModelManifest.from_file(manifest_path)
        base = manifest_path.parent

        diagnostics: list[SourceDiagnostic] = []
        space = None
        graph = None
        inferencers: list[ValueInferencer] = []

        space_path = base / manifest.space
        if not space_path.is_file():
            diagnostics.append(error(f"space file not found: {space_path}",
                                     SourcePos(1, 1, str(manifest_path))))
        else:
            try:
                space = parse_policy_space(space_path.read_text(encoding="utf-8"), str(space_path))
            except ParseError as exc:
                diagnostics.append(exc.diagnostic)

        sources = []
        missing = False
        for name in manifest.graphs:
            graph_path = base / name
            if not graph_path.is_file():
                diagnostics.append(error(f"graph file not found: {graph_path}",
                                         SourcePos(1, 1, str(manifest_path))))
                missing = True
                continue
            sources.append((str(graph_path), graph_path.read_text(encoding="utf-8")))
        if sources and not missing:
            try:
                graph = parse_decision_graph(sources)
            except ParseError as exc:
                diagnostics.append(exc.diagnostic)

        for name in manifest.inferencers:
            vi_path = base / name
            if not vi_path.is_file():
                diagnostics.append(error(f"inferencer file not found: {vi_path}",
                                         SourcePos(1, 1, str(manifest_path))))
                continue
            try:
                inferencers.extend(
                    parse_value_inferencers(vi_path.read_text(encoding="utf-8"), str(vi_path)))
            except ParseError as exc:
                diagnostics.append(exc.diagnostic)

        localizations: dict[str, LocalizationPackage] = {}
        if manifest.languages and space is not None and graph is not None:
            lang_dir = base / manifest.languages
            if lang_dir.is_dir():
                for locale_dir in sorted(p for p in lang_dir.iterdir() if p.is_dir()):
                    package, diags = load_package(locale_dir, space, graph)
                    diagnostics.extend(diags)
                    localizations[package.locale] = package

        return cls(manifest, space, graph, inferencers, localizations, diagnostics)

    @classmethod
    def from_sources(cls, space_src: str, graph_srcs: list[str] | str,
                     inferencer_srcs: list[str] | str = (),
                     model_id: str = "inline", title: str | None = None,
                     version: str = "1") -> "PolicyModel":
        """Assemble a model from in-memory DSL sources (tests, fixtures)."""
        if isinstance(graph_srcs, str):
            graph_srcs = [graph_srcs]
        if isinstance(inferencer_srcs, str):
            inferencer_srcs = [inferencer_srcs]
        manifest = ModelManifest(
            id=model_id, title=title or model_id, version=version,
            space="space.ps", graphs=[f"graph{i}.dg" for i in range(len(graph_srcs))],
            inferencers=[f"inf{i}.vi" for i in range(len(inferencer_srcs))])
        diagnostics: list[SourceDiagnostic] = []
        space = None
        graph = None
        inferencers: list[ValueInferencer] = []
        try:
            space = parse_policy_space(space_src, "space.ps")
        except ParseError as exc:
            diagnostics.append(exc.diagnostic)
        try:
            graph = parse_decision_graph(list(graph_srcs))
        except ParseError as exc:
            diagnostics.append(exc.diagnostic)
        for i, src in enumerate(inferencer_srcs):
            try:
                inferencers.extend(parse_value_inferencers(src, f"inf{i}.vi"))
            except ParseError as exc:
                diagnostics.append(exc.diagnostic)
        return cls(manifest, space, graph, inferencers, {}, diagnostics)
