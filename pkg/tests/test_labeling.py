"""Pair extraction rules and cluster label generation."""

from collections import Counter
from dataclasses import dataclass

import numpy as np
import pytest

from openintent.data_io import ParseTable, ParseToken
from openintent.errors import ValidationError
from openintent.labeling import (
    NONE_SLOT,
    cluster_pair_counts,
    extract_pair,
    generate_labels,
    pair_string,
)

from fixture_data import EXPECTED_LABELS, GROUP_SIZES, group_assignments


@dataclass
class FakeClustering:
    k: int
    assignments: np.ndarray


def tok(form, upos, head, deprel, lemma=None):
    return ParseToken(form=form, lemma=lemma if lemma is not None else form,
                      upos=upos, head=head, deprel=deprel)


class TestExtractPair:
    def test_plain_direct_object(self, fixture_parses):
        assert extract_pair(fixture_parses.sentences["u0000"]) == ("play", "music")

    def test_aux_before_verb_does_not_block_pair(self, fixture_parses):
        assert extract_pair(fixture_parses.sentences["u0003"]) == ("play", "music")

    def test_attr_with_aux_head(self, fixture_parses):
        assert extract_pair(fixture_parses.sentences["u0016"]) == ("be", "weather")

    def test_verbless_fragment(self, fixture_parses):
        assert extract_pair(fixture_parses.sentences["u0022"]) == (NONE_SLOT, NONE_SLOT)

    def test_numeric_form_skipped(self, fixture_parses):
        # "4" is mis-tagged NOUN in the fixture; the form filter catches it
        assert extract_pair(fixture_parses.sentences["u0023"]) == ("give", "star")

    def test_num_upos_skipped(self, fixture_parses):
        assert extract_pair(fixture_parses.sentences["u0024"]) == ("give", "star")

    def test_verb_without_object(self, fixture_parses):
        assert extract_pair(fixture_parses.sentences["u0027"]) == ("search", NONE_SLOT)

    def test_object_without_verb(self, fixture_parses):
        assert extract_pair(fixture_parses.sentences["u0029"]) == (NONE_SLOT, "movie")

    def test_relations_parameter(self, fixture_parses):
        # the weather fixture links only via attr; restricting to dobj
        # leaves just the verb
        sentence = fixture_parses.sentences["u0016"]
        assert extract_pair(sentence, relations=("dobj",)) == ("be", NONE_SLOT)

    def test_object_whose_head_is_not_a_verb(self):
        sentence = (
            tok("find", "VERB", 0, "root"),
            tok("movie", "NOUN", 3, "dobj"),  # head is the noun below
            tok("night", "NOUN", 1, "npadvmod"),
        )
        assert extract_pair(sentence) == ("find", NONE_SLOT)

    def test_missing_lemma_falls_back_to_form(self):
        sentence = (
            tok("Play", "VERB", 0, "root", lemma="_"),
            tok("Jazz", "PROPN", 1, "dobj", lemma="_"),
        )
        assert extract_pair(sentence) == ("play", "jazz")

    def test_lemmas_lowercased(self):
        sentence = (
            tok("visit", "VERB", 0, "root", lemma="Visit"),
            tok("Paris", "PROPN", 1, "dobj", lemma="Paris"),
        )
        assert extract_pair(sentence) == ("visit", "paris")

    @pytest.mark.parametrize("form", ["4", "4.5", "-3", "+12"])
    def test_numeric_literal_forms(self, form):
        sentence = (
            tok("rate", "VERB", 0, "root"),
            tok(form, "NOUN", 1, "dobj"),
        )
        assert extract_pair(sentence) == ("rate", NONE_SLOT)

    def test_empty_sentence(self):
        assert extract_pair(()) == (NONE_SLOT, NONE_SLOT)


class TestClusterPairCounts:
    def test_fixture_counts(self, fixture_corpus, fixture_parses):
        clustering = FakeClustering(k=5, assignments=group_assignments())
        counts = cluster_pair_counts(clustering, fixture_parses, fixture_corpus)
        assert counts[0] == Counter(
            {("play", "music"): 5, ("play", "song"): 2, ("play", "track"): 1}
        )
        assert counts[1] == Counter(
            {("book", "restaurant"): 4, ("book", "table"): 3, ("book", "spot"): 1}
        )
        assert counts[2] == Counter(
            {("be", "weather"): 4, ("be", "forecast"): 2, (NONE_SLOT, NONE_SLOT): 1}
        )
        assert counts[3] == Counter({("give", "star"): 4})
        assert counts[4] == Counter(
            {("search", NONE_SLOT): 2, (NONE_SLOT, "movie"): 1}
        )

    def test_missing_parse_is_an_error(self, fixture_corpus, fixture_parses):
        table = ParseTable({k: v for k, v in fixture_parses.sentences.items() if k != "u0005"})
        clustering = FakeClustering(k=5, assignments=group_assignments())
        with pytest.raises(ValidationError, match="u0005"):
            cluster_pair_counts(clustering, table, fixture_corpus)


class TestGenerateLabels:
    def test_fixture_labels(self, fixture_corpus, fixture_parses):
        clustering = FakeClustering(k=5, assignments=group_assignments())
        labels = generate_labels(clustering, fixture_parses, fixture_corpus)
        assert {cl.label for cl in labels.clusters.values()} == EXPECTED_LABELS
        assert labels.clusters[0].label == "play-music"
        assert labels.clusters[1].label == "book-restaurant"
        assert labels.clusters[2].label == "be-weather"
        assert labels.clusters[3].label == "give-star"
        assert labels.clusters[4].label == "search-movie"

    def test_fallback_flag_only_on_marginal_label(self, fixture_corpus, fixture_parses):
        clustering = FakeClustering(k=5, assignments=group_assignments())
        labels = generate_labels(clustering, fixture_parses, fixture_corpus)
        assert [labels.clusters[c].fallback_used for c in range(5)] == [
            False, False, False, False, True,
        ]

    def test_coverage_is_top3_share(self, fixture_corpus, fixture_parses):
        clustering = FakeClustering(k=5, assignments=group_assignments())
        labels = generate_labels(clustering, fixture_parses, fixture_corpus)
        # every fixture cluster has at most 3 distinct pairs
        for c in range(5):
            assert labels.clusters[c].coverage == pytest.approx(1.0)

    def test_coverage_below_one_with_four_pairs(self):
        sentences = {}
        pairs = [("play", "music")] * 3 + [("play", "song")] * 2 + [
            ("play", "track"), ("play", "tune"),
        ]
        for i, (verb, noun) in enumerate(pairs):
            sentences[f"u{i}"] = (
                tok(verb, "VERB", 0, "root"),
                tok(noun, "NOUN", 1, "dobj"),
            )
        corpus = _corpus_for(sentences)
        clustering = FakeClustering(k=1, assignments=np.zeros(len(pairs), dtype=int))
        labels = generate_labels(clustering, ParseTable(sentences), corpus)
        assert labels.clusters[0].coverage == pytest.approx(6 / 7)

    def test_frequency_tie_takes_lexicographically_smallest(self):
        sentences = {
            "u0": (tok("play", "VERB", 0, "root"), tok("music", "NOUN", 1, "dobj")),
            "u1": (tok("book", "VERB", 0, "root"), tok("album", "NOUN", 1, "dobj")),
        }
        corpus = _corpus_for(sentences)
        clustering = FakeClustering(k=1, assignments=np.zeros(2, dtype=int))
        labels = generate_labels(clustering, ParseTable(sentences), corpus)
        assert labels.clusters[0].label == "book-album"

    def test_partial_pairs_never_beat_complete_ones(self):
        # many partial pairs, one complete pair: the complete pair labels
        sentences = {
            f"u{i}": (tok("search", "VERB", 0, "root"),) for i in range(4)
        }
        sentences["u4"] = (
            tok("find", "VERB", 0, "root"),
            tok("movie", "NOUN", 1, "dobj"),
        )
        corpus = _corpus_for(sentences)
        clustering = FakeClustering(k=1, assignments=np.zeros(5, dtype=int))
        labels = generate_labels(clustering, ParseTable(sentences), corpus)
        assert labels.clusters[0].label == "find-movie"
        assert not labels.clusters[0].fallback_used

    def test_fallback_with_only_actions(self):
        sentences = {f"u{i}": (tok("search", "VERB", 0, "root"),) for i in range(3)}
        corpus = _corpus_for(sentences)
        clustering = FakeClustering(k=1, assignments=np.zeros(3, dtype=int))
        labels = generate_labels(clustering, ParseTable(sentences), corpus)
        assert labels.clusters[0].label == "search"
        assert labels.clusters[0].fallback_used

    def test_fallback_with_nothing(self):
        sentences = {"u0": (), "u1": ()}
        corpus = _corpus_for(sentences)
        clustering = FakeClustering(k=1, assignments=np.zeros(2, dtype=int))
        labels = generate_labels(clustering, ParseTable(sentences), corpus)
        assert labels.clusters[0].label == "unlabeled"
        assert labels.clusters[0].fallback_used

    def test_top_pairs_capped_and_ordered(self):
        sentences = {}
        for i in range(12):
            sentences[f"u{i:02d}"] = (
                tok("do", "VERB", 0, "root"),
                tok(f"thing{i:02d}", "NOUN", 1, "dobj"),
            )
        for i in range(12, 15):
            sentences[f"u{i:02d}"] = (
                tok("do", "VERB", 0, "root"),
                tok("thing00", "NOUN", 1, "dobj"),
            )
        corpus = _corpus_for(sentences)
        clustering = FakeClustering(k=1, assignments=np.zeros(15, dtype=int))
        labels = generate_labels(clustering, ParseTable(sentences), corpus)
        top = labels.clusters[0].top_pairs
        assert len(top) == 10
        assert top[0] == ("do-thing00", 4)
        assert [c for _, c in top[1:]] == [1] * 9
        assert [p for p, _ in top[1:]] == sorted(p for p, _ in top[1:])

    def test_report_shape(self, fixture_corpus, fixture_parses):
        clustering = FakeClustering(k=5, assignments=group_assignments())
        out = generate_labels(clustering, fixture_parses, fixture_corpus).report_dict()
        assert set(out) == {"clusters"}
        assert set(out["clusters"]) == {"0", "1", "2", "3", "4"}
        entry = out["clusters"]["4"]
        assert set(entry) == {"label", "fallback_used", "coverage", "top_pairs"}
        assert entry["label"] == "search-movie"
        assert entry["top_pairs"] == [["search-NONE", 2], ["NONE-movie", 1]]


def _corpus_for(sentences):
    from openintent.data_io import Corpus, Utterance

    return Corpus(tuple(Utterance(uid, "x") for uid in sentences))


def test_pair_string_renders_none_slots():
    assert pair_string(("play", "music")) == "play-music"
    assert pair_string((NONE_SLOT, "movie")) == "NONE-movie"
