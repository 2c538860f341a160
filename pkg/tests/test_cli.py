import json
import shutil

import pytest

from snmt.cli import cli_dispatch
from conftest import PAIRS_TSV


def run(argv, capsys):
    code = cli_dispatch(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


TINY_TRAIN = [
    "--embed-dim", "16", "--hidden-dim", "16", "--max-epochs", "3",
    "--batch-size", "8", "--val-fraction", "0", "--patience", "5", "--quiet",
]


@pytest.fixture(scope="module")
def tiny_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("cli") / "run1"
    code = cli_dispatch(["train", "--corpus", str(PAIRS_TSV), "--out", str(out),
                         "--seed", "7", *TINY_TRAIN])
    assert code == 0
    return out


class TestTrain:
    def test_repeat_run_byte_identical(self, tiny_run, tmp_path, capsys):
        out2 = tmp_path / "run2"
        code, _, _ = run(["train", "--corpus", str(PAIRS_TSV), "--out", str(out2),
                          "--seed", "7", *TINY_TRAIN], capsys)
        assert code == 0
        assert (tiny_run / "model.snmt").read_bytes() == (out2 / "model.snmt").read_bytes()

    def test_history_written(self, tiny_run):
        history = json.loads((tiny_run / "history.json").read_text())
        assert len(history["train_loss"]) == 3

    def test_config_file_mirrors_flags(self, tmp_path, capsys):
        conf = tmp_path / "conf.json"
        conf.write_text(json.dumps({"embed-dim": 16, "hidden-dim": 16,
                                    "max-epochs": 1, "val-fraction": 0,
                                    "quiet": True}))
        code, _, _ = run(["train", "--corpus", str(PAIRS_TSV),
                          "--out", str(tmp_path / "r"), "--config", str(conf)], capsys)
        assert code == 0

    def test_missing_corpus_is_runtime_error(self, tmp_path, capsys):
        code, _, err = run(["train", "--corpus", "no/such.tsv",
                            "--out", str(tmp_path / "x"), "--quiet"], capsys)
        assert code == 2
        assert "error" in err


class TestTranslateCommand:
    def test_translate_with_svg(self, overfit_checkpoint, tmp_path, capsys):
        path, _, _ = overfit_checkpoint
        svg = tmp_path / "out.svg"
        code, out, _ = run(["translate", "--model", str(path),
                            "--text", "अहं एकाकिनी अस्मि",
                            "--attn-svg", str(svg)], capsys)
        assert code == 0
        assert out.strip() == "मैं अकेली हूँ"
        assert svg.read_text().startswith("<svg")

    def test_model_directory_resolution(self, overfit_checkpoint, tmp_path, capsys):
        path, _, _ = overfit_checkpoint
        d = tmp_path / "rundir"
        d.mkdir()
        shutil.copy(path, d / "model.snmt")
        code, out, _ = run(["translate", "--model", str(d),
                            "--text", "अहं बहु व्यस्तः अस्मि"], capsys)
        assert code == 0
        assert out.strip() == "मैं बहुत व्यस्त हूँ"


class TestAttnPlot:
    def test_writes_svg(self, overfit_checkpoint, tmp_path, capsys):
        path, _, _ = overfit_checkpoint
        svg = tmp_path / "plot.svg"
        code, out, _ = run(["attn-plot", "--model", str(path),
                            "--text", "अहं तर्तुं शक्नोमि", "--out", str(svg)], capsys)
        assert code == 0
        text = svg.read_text()
        assert "&lt;start&gt;" in text and "&lt;end&gt;" in text
        assert "तर्तुं" in text


class TestBleuCommand:
    def test_identical_files_score_one(self, tmp_path, capsys):
        c = tmp_path / "c.txt"
        r = tmp_path / "r.txt"
        c.write_text("मैं तैर सकता हूँ\nमैं अकेली हूँ\n", encoding="utf-8")
        shutil.copy(c, r)
        code, out, _ = run(["bleu", "--candidates", str(c), "--references", str(r)], capsys)
        assert code == 0
        assert "1.0000" in out


class TestEvaluateCommand:
    def test_accuracy_output(self, tmp_path, capsys):
        rec = tmp_path / "scores.tsv"
        rec.write_text("s1\t4\ns2\t3\ns3\t2\ns4\t1\n", encoding="utf-8")
        code, out, _ = run(["evaluate", "--records", str(rec)], capsys)
        assert code == 0
        assert "accuracy (score >= 3): 0.5000" in out


class TestStatsCommand:
    def test_fixture_counts(self, fixture_corpus, capsys):
        code, out, _ = run(["stats", "--corpus", str(PAIRS_TSV)], capsys)
        assert code == 0
        assert f"samples: {len(fixture_corpus.pairs)}" in out
        assert f"source tokens: {fixture_corpus.source_token_count}" in out


class TestDispatch:
    def test_unknown_flag_is_usage_error(self, capsys):
        code, _, err = run(["stats", "--nope", "x"], capsys)
        assert code == 1
        assert "usage error" in err

    def test_help_exits_zero(self, capsys):
        assert run(["--help"], capsys)[0] == 0
        for sub in ("train", "translate", "evaluate", "bleu", "stats",
                    "serve", "attn-plot"):
            assert run([sub, "--help"], capsys)[0] == 0
