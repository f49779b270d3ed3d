"""Parse export: CoNLL-U layout, degenerate sentences, and round-trips."""

from __future__ import annotations

import pytest

from openintent_exporter import ExportError, export_parses
from openintent_exporter.corpus import make_ids
from openintent_exporter.parses import TokenRow, write_conllu


class TestWriteConllu:
    def test_sentence_layout(self, tmp_path):
        rows = [
            TokenRow("play", "play", "VERB", 0, "root"),
            TokenRow("music", "music", "NOUN", 1, "dobj"),
        ]
        path = tmp_path / "p.conllu"
        write_conllu(["u0000"], [rows], path)
        lines = path.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "# sent_id = u0000"
        assert lines[1].split("\t") == [
            "1", "play", "play", "VERB", "_", "_", "0", "root", "_", "_",
        ]
        assert lines[2].split("\t")[6] == "1"
        assert lines[3] == ""

    def test_empty_sentence_still_emits_sent_id(self, tmp_path):
        path = tmp_path / "p.conllu"
        write_conllu(["u0000", "u0001"], [[], [TokenRow("hi", "hi", "INTJ", 0, "root")]], path)
        text = path.read_text(encoding="utf-8")
        assert "# sent_id = u0000\n\n# sent_id = u0001\n" in text

    def test_structural_characters_are_stripped_from_fields(self, tmp_path):
        rows = [TokenRow("a\tb", "a\nb", "X", 0, "root")]
        path = tmp_path / "p.conllu"
        write_conllu(["u0000"], [rows], path)
        token_line = path.read_text(encoding="utf-8").splitlines()[1]
        assert len(token_line.split("\t")) == 10
        assert token_line.split("\t")[1] == "a b"

    def test_length_mismatch_is_an_error(self, tmp_path):
        with pytest.raises(ExportError, match="2 ids for 1 parsed sentences"):
            write_conllu(["u0000", "u0001"], [[]], tmp_path / "p.conllu")


class TestExportParses:
    def test_round_trips_through_the_pipeline_reader(self, stub_parser, tmp_path):
        from openintent.data_io import Corpus, Utterance, read_conllu

        texts = ["play some jazz", "book a table", ""]
        ids = make_ids(len(texts))
        path = export_parses(ids, texts, tmp_path, parser=stub_parser)
        corpus = Corpus(tuple(Utterance(i, t) for i, t in zip(ids, texts)))
        table = read_conllu(path, corpus)
        assert set(table.sentences) == set(ids)
        assert [t.form for t in table.sentences["u0000"]] == ["play", "some", "jazz"]
        assert len(table.sentences["u0002"]) == 0

    def test_stub_parser_heads_and_relations(self, stub_parser, tmp_path):
        path = export_parses(["u0000"], ["rate this book"], tmp_path, parser=stub_parser)
        lines = path.read_text(encoding="utf-8").splitlines()
        heads = [line.split("\t")[6] for line in lines[1:4]]
        rels = [line.split("\t")[7] for line in lines[1:4]]
        assert heads == ["0", "1", "1"]
        assert rels == ["root", "dobj", "dobj"]

    def test_output_feeds_label_generation(self, stub_parser, tmp_path):
        from types import SimpleNamespace

        from openintent.data_io import Corpus, Utterance, read_conllu
        from openintent.labeling import generate_labels

        texts = ["play jazz", "play blues", "book table"]
        ids = make_ids(len(texts))
        path = export_parses(ids, texts, tmp_path, parser=stub_parser)
        corpus = Corpus(tuple(Utterance(i, t) for i, t in zip(ids, texts)))
        table = read_conllu(path, corpus)
        clustering = SimpleNamespace(k=2, assignments=[0, 0, 1])
        labels = generate_labels(clustering, table, corpus)
        assert labels.clusters[0].label in ("play-jazz", "play-blues")
        assert labels.clusters[1].label == "book-table"

    def test_missing_parser_backend_is_reported(self, monkeypatch, tmp_path):
        import openintent_exporter.parses as parses_module

        def unavailable(model="en_core_web_sm"):
            raise ExportError("spaCy is not installed; pip install spacy")

        monkeypatch.setattr(parses_module, "build_spacy_parser", unavailable)
        with pytest.raises(ExportError, match="spaCy"):
            parses_module.export_parses(["u0000"], ["hi"], tmp_path)
