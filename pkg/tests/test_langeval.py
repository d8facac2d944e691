from __future__ import annotations

import random
import string

import pytest

from pictutor.core.types import Affect, Language, PedagogicalAnchor
from pictutor.langeval.evaluate import (
    assess,
    detect_off_topic,
    keyword_coverage,
    specificity_check,
)
from pictutor.langeval.lexicon import (
    LexiconFormatError,
    LexiconEntry,
    VocabularyHierarchy,
    load_lexicon,
)
from pictutor.langeval.tokens import tokenize

from conftest import entry
from oracles import scanner_tokens


class TestTokenize:
    def test_lowercases_and_splits_on_punctuation(self):
        assert tokenize("The boy is Swimming!", Language.EN) == ["the", "boy", "is", "swimming"]

    def test_empty_string(self):
        assert tokenize("", Language.EN) == []

    def test_matches_scanner_oracle_on_random_ascii(self):
        rng = random.Random(11)
        alphabet = string.ascii_letters + string.digits + " .,!?;:'\"()-\t"
        for _ in range(50):
            text = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 60)))
            assert tokenize(text, Language.EN) == scanner_tokens(text)

    def test_rejoin_idempotence(self):
        rng = random.Random(12)
        alphabet = string.ascii_letters + " .,!?"
        for language in (Language.EN, Language.MS, Language.TA):
            for _ in range(25):
                text = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 40)))
                tokens = tokenize(text, language)
                assert tokenize(" ".join(tokens), language) == tokens

    def test_tamil_words_stay_whole(self):
        tokens = tokenize("சிறுவன் குளத்தில் நீந்துகிறான்", Language.TA)
        assert tokens == ["சிறுவன்", "குளத்தில்", "நீந்துகிறான்"]

    def test_chinese_chars_plus_greedy_lexicon_matches(self):
        tokens = tokenize("男孩在游泳池里游泳。", Language.ZH, surfaces=("游泳", "游泳池", "男孩"))
        for ch in "男孩在游泳池里游泳":
            assert ch in tokens
        assert "游泳池" in tokens  # longest match wins at the first position
        assert "游泳" in tokens  # second occurrence has no longer competitor
        assert "男孩" in tokens
        assert "。" not in tokens

    def test_chinese_without_surfaces_is_characters_only(self):
        assert tokenize("男孩游泳", Language.ZH) == ["男", "孩", "游", "泳"]


class TestKeywordCoverage:
    def test_all_targets_matched(self):
        targets = [entry("swim", "swim", "swims", "swimming"), entry("pool", "pool")]
        coverage, matched = keyword_coverage(
            ["the", "boy", "swims", "in", "the", "pool"], targets
        )
        assert coverage == 1.0
        assert matched == {"swim", "pool"}

    def test_no_targets_is_vacuous_full_coverage(self):
        coverage, matched = keyword_coverage(["anything"], [])
        assert coverage == 1.0
        assert matched == frozenset()

    def test_partial_coverage_fraction(self):
        targets = [entry("swim"), entry("pool"), entry("ball")]
        coverage, matched = keyword_coverage(["pool"], targets)
        assert coverage == pytest.approx(1 / 3)
        assert matched == {"pool"}

    def test_child_surface_matches_parent_target(self, play_hierarchy):
        targets = [play_hierarchy.entries["playing"]]
        coverage, matched = keyword_coverage(["swimming"], targets, play_hierarchy)
        assert coverage == 1.0
        assert matched == {"playing"}

    def test_monotone_under_token_extension(self, play_hierarchy):
        rng = random.Random(21)
        vocabulary = ["playing", "swimming", "pool", "boy", "xyz", "ball", "climbs"]
        targets = list(play_hierarchy.entries.values())
        for _ in range(50):
            tokens = [rng.choice(vocabulary) for _ in range(rng.randint(0, 6))]
            extra = [rng.choice(vocabulary) for _ in range(rng.randint(0, 4))]
            before, _ = keyword_coverage(tokens, targets, play_hierarchy)
            after, _ = keyword_coverage(tokens + extra, targets, play_hierarchy)
            assert after >= before


class TestSpecificity:
    def test_general_only_mention_fails(self, play_hierarchy):
        targets = [play_hierarchy.entries["playing"]]
        assert specificity_check(["playing"], targets, play_hierarchy) is False

    def test_specific_child_satisfies_goal(self, play_hierarchy):
        targets = [play_hierarchy.entries["playing"]]
        assert specificity_check(["swimming"], targets, play_hierarchy) is True

    def test_childless_general_is_vacuously_fine(self, play_hierarchy):
        targets = [play_hierarchy.entries["pool"]]
        assert specificity_check(["pool"], targets, play_hierarchy) is True

    def test_invariant_to_order_and_duplication(self, play_hierarchy):
        targets = list(play_hierarchy.entries.values())
        rng = random.Random(31)
        tokens = ["playing", "pool", "boy"]
        reference = specificity_check(tokens, targets, play_hierarchy)
        for _ in range(20):
            noisy = tokens * rng.randint(1, 3)
            rng.shuffle(noisy)
            assert specificity_check(noisy, targets, play_hierarchy) == reference


class TestOffTopic:
    def test_disjoint_tokens_are_off_topic(self):
        assert detect_off_topic(["dinosaur", "robot"], {"boy", "pool", "swim"}) is True

    def test_silence_is_not_off_topic(self):
        assert detect_off_topic([], {"boy"}) is False

    def test_any_scene_word_keeps_on_topic(self):
        assert detect_off_topic(["boy"], {"boy", "pool"}) is False

    def test_single_token_smalltalk_allowed(self):
        assert detect_off_topic(["yes"], {"boy"}, smalltalk={"yes", "no"}) is False
        assert detect_off_topic(["yes", "yes"], {"boy"}, smalltalk={"yes"}) is True

    def test_off_topic_implies_zero_coverage(self, play_hierarchy):
        rng = random.Random(41)
        targets = list(play_hierarchy.entries.values())
        keywords = set()
        for target in targets:
            keywords.update(s.lower() for s in target.surface_forms)
        words = ["dinosaur", "robot", "playing", "pool", "zeppelin", "boy"]
        for _ in range(100):
            tokens = [rng.choice(words) for _ in range(rng.randint(1, 5))]
            if detect_off_topic(tokens, keywords):
                coverage, _ = keyword_coverage(tokens, targets, play_hierarchy)
                assert coverage == 0.0


class TestAssess:
    def test_full_sentence(self, play_hierarchy):
        targets = [entry("swim", "swim", "swims", "swimming"), entry("pool", "pool")]
        result = assess(
            "the boy swims in the pool",
            Language.EN,
            targets,
            play_hierarchy,
            PedagogicalAnchor.SENTENCE_CONSTRUCTION,
        )
        assert result.coverage == 1.0
        assert result.specificity_ok is True
        assert result.sentence_ok is True
        assert result.off_topic is False

    def test_single_word_fails_sentence_check(self, play_hierarchy):
        targets = [entry("swim", "swim"), entry("pool", "pool")]
        result = assess(
            "pool",
            Language.EN,
            targets,
            play_hierarchy,
            PedagogicalAnchor.SENTENCE_CONSTRUCTION,
        )
        assert result.coverage == 0.5
        assert result.sentence_ok is False

    def test_affect_hint_passthrough(self, play_hierarchy):
        result = assess(
            "pool",
            Language.EN,
            [entry("pool", "pool")],
            play_hierarchy,
            affect_hint=Affect.FRUSTRATED,
        )
        assert result.affect is Affect.FRUSTRATED

    def test_matches_compositional_oracle(self, play_hierarchy):
        rng = random.Random(51)
        targets = list(play_hierarchy.entries.values())
        words = ["playing", "swimming", "climbs", "pool", "boy", "ball",
                 "dinosaur", "the", "a", "robot"]
        smalltalk = frozenset({"yes", "no"})
        keywords = {"boy", "pool", "ball", "playing", "swimming", "climbing"}
        for _ in range(200):
            transcript = " ".join(rng.choice(words) for _ in range(rng.randint(0, 7)))
            anchor = rng.choice(list(PedagogicalAnchor))
            result = assess(
                transcript,
                Language.EN,
                targets,
                play_hierarchy,
                anchor,
                scene_keywords=keywords,
                smalltalk=smalltalk,
            )
            tokens = tokenize(transcript, Language.EN)
            coverage, matched = keyword_coverage(tokens, targets, play_hierarchy)
            assert result.coverage == coverage
            assert result.matched_targets == matched
            assert result.specificity_ok == specificity_check(tokens, targets, play_hierarchy)
            assert result.off_topic == detect_off_topic(tokens, keywords, smalltalk)
            if anchor is PedagogicalAnchor.SENTENCE_CONSTRUCTION:
                assert result.sentence_ok == (len(tokens) >= 3 and coverage > 0)
            else:
                assert result.sentence_ok == (coverage > 0)


class TestLexiconFiles:
    def test_bundled_lexicons_load_for_all_languages(self):
        from pictutor.service.config import bundled_data_path

        for language in Language:
            lexicon = load_lexicon(
                bundled_data_path("lexicons") / f"lexicon_{language.value.lower()}.json"
            )
            assert lexicon.language is language
            assert lexicon.entries
            assert lexicon.smalltalk

    def test_children_map_inverts_parent_links(self, play_hierarchy):
        for child_key, item in play_hierarchy.entries.items():
            if item.parent_key is not None:
                assert child_key in play_hierarchy.children[item.parent_key]
        for parent, children in play_hierarchy.children.items():
            for child in children:
                assert play_hierarchy.entries[child].parent_key == parent

    def test_specific_without_parent_rejected(self):
        with pytest.raises(LexiconFormatError):
            entry("swim", "swim", specific=True)

    def test_parent_must_exist_and_be_general(self):
        with pytest.raises(LexiconFormatError):
            VocabularyHierarchy.from_entries([entry("swim", "swim", specific=True, parent="nope")])
        with pytest.raises(LexiconFormatError):
            VocabularyHierarchy.from_entries(
                [
                    entry("move", "move", specific=True, parent="act"),
                    entry("act", "act"),
                    entry("swim", "swim", specific=True, parent="move"),
                ]
            )
