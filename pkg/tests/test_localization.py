from __future__ import annotations

from pathlib import Path

import pytest

from policyspace.localization import (
    LocalizationKeyError,
    default_locale,
    entity_long_text,
    load_package,
    localize_answer,
    localize_entity,
    localize_node,
    negotiate_locale,
)

from conftest import FIG_DEMO_DIR


class TestLoadPackage:
    def test_fig_demo_full_ask_coverage(self, fig_demo):
        package = fig_demo.package("en")
        assert package is not None
        assert package.ask_coverage == (3, 3)
        assert package.title == "Job Termination Fairness Demo"
        assert package.about and "demonstration" in package.about

    def test_empty_directory_all_fallbacks(self, fig_demo, tmp_path):
        empty = tmp_path / "xx"
        empty.mkdir()
        package, diags = load_package(empty, fig_demo.space, fig_demo.graph)
        assert diags == []
        assert package.locale == "xx"
        assert package.ask_coverage == (0, 3)
        assert package.entity_coverage[0] == 0
        # fallback chain still yields text for everything
        assert localize_node(package, fig_demo.graph, "gp-hearing") == (
            "Did you get a hearing prior to being fired?")
        assert localize_answer(package, fig_demo.graph, "yes") == "yes"

    def test_unknown_node_id_warned_and_dropped(self, fig_demo, tmp_path):
        locale_dir = tmp_path / "en"
        (locale_dir / "nodes").mkdir(parents=True)
        (locale_dir / "nodes" / "gp-missing.md").write_text("Where is this?\n")
        package, diags = load_package(locale_dir, fig_demo.space, fig_demo.graph)
        assert any("gp-missing" in d.message and d.severity == "warning" for d in diags)
        assert "gp-missing" not in package.node_texts

    def test_unknown_entity_warned(self, fig_demo, tmp_path):
        locale_dir = tmp_path / "en"
        locale_dir.mkdir()
        (locale_dir / "space.md").write_text("# Root/Ghost: Spooky\n\nBoo.\n")
        package, diags = load_package(locale_dir, fig_demo.space, fig_demo.graph)
        assert any("Root/Ghost" in d.message for d in diags)
        assert package.entities == {}

    def test_malformed_answers_line_is_positioned_error(self, fig_demo, tmp_path):
        locale_dir = tmp_path / "en"
        locale_dir.mkdir()
        (locale_dir / "answers.txt").write_text("yes: Yes\njust some text\n")
        _, diags = load_package(locale_dir, fig_demo.space, fig_demo.graph)
        bad = [d for d in diags if d.severity == "error"]
        assert len(bad) == 1
        assert bad[0].line == 2

    def test_unknown_answer_key_dropped(self, fig_demo, tmp_path):
        locale_dir = tmp_path / "en"
        locale_dir.mkdir()
        (locale_dir / "answers.txt").write_text("maybe: Perhaps\n")
        package, diags = load_package(locale_dir, fig_demo.space, fig_demo.graph)
        assert "maybe" not in package.answers
        assert any("maybe" in d.message for d in diags)


class TestLocalize:
    def test_question_text(self, fig_demo):
        package = fig_demo.package("en")
        assert localize_node(package, fig_demo.graph, "gp-hearing") == (
            "Did you get a hearing prior to being fired?")

    def test_answer_display(self, fig_demo):
        package = fig_demo.package("en")
        assert localize_answer(package, fig_demo.graph, "yes") == "Yes"

    def test_entity_three_levels(self, fig_demo):
        package = fig_demo.package("en")
        path = "Root/ProcessFairness/illegal"
        assert localize_entity(package, fig_demo.space, path) == "Illegal process"
        assert localize_entity(package, fig_demo.space, path, "tooltip") == (
            "The dismissal violated the law.")
        long_text = entity_long_text(package, path)
        assert long_text and "labor court" in long_text

    def test_remark_fallback(self, fig_demo):
        # Plan has a source remark but Plan is also localized; use no package
        assert localize_entity(None, fig_demo.space, "Root/Plan") == (
            "aid plan tier the worker may join")

    def test_identifier_last_resort(self, fig_demo):
        assert localize_entity(None, fig_demo.space,
                               "Root/Recommendations/sueFormerEmployerSoon") == (
            "sueFormerEmployerSoon")

    def test_never_empty_for_valid_keys(self, fig_demo):
        from policyspace.localization import model_entity_paths

        package = fig_demo.package("en")
        for path in sorted(model_entity_paths(fig_demo.space)):
            for level in ("name", "tooltip", "long"):
                assert localize_entity(package, fig_demo.space, path, level) != ""
                assert localize_entity(None, fig_demo.space, path, level) != ""

    def test_unknown_key_rejected(self, fig_demo):
        with pytest.raises(LocalizationKeyError):
            localize_entity(fig_demo.package("en"), fig_demo.space, "Root/Nope")
        with pytest.raises(LocalizationKeyError):
            localize_node(fig_demo.package("en"), fig_demo.graph, "gp-nope")
        with pytest.raises(LocalizationKeyError):
            localize_answer(fig_demo.package("en"), fig_demo.graph, "perhaps")


class TestNegotiation:
    def test_exact_match(self):
        assert negotiate_locale(["en", "he"], "he", "en") == "he"

    def test_primary_subtag(self):
        assert negotiate_locale(["en", "he"], "en-US", "he") == "en"

    def test_default_fallback(self):
        assert negotiate_locale(["en", "he"], "fr", "en") == "en"

    def test_no_packages(self):
        assert negotiate_locale([], "en", None) is None

    def test_default_prefers_en(self):
        assert default_locale(["de", "en", "he"]) == "en"
        assert default_locale(["de", "he"]) == "de"


def test_multiple_packages_served_without_reparse(fig_demo, tmp_path):
    """One model serves several locales: same graph object, distinct packages."""
    he_dir = tmp_path / "he"
    (he_dir / "nodes").mkdir(parents=True)
    (he_dir / "nodes" / "gp-hearing.md").write_text("Hearing question in Hebrew\n")
    package_he, diags = load_package(he_dir, fig_demo.space, fig_demo.graph)
    assert diags == []
    package_en = fig_demo.package("en")
    assert localize_node(package_he, fig_demo.graph, "gp-hearing") == (
        "Hearing question in Hebrew")
    assert localize_node(package_en, fig_demo.graph, "gp-hearing") == (
        "Did you get a hearing prior to being fired?")
