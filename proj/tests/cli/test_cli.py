"""End-to-end checks of the qnnbench command line: exit codes and artifacts."""
import csv
import json
import os
import subprocess
import sys
import tempfile
import unittest

BINARY = os.environ["QNNBENCH_BIN"]
DATA_DIR = os.environ["QNNBENCH_DATA_DIR"]
HEADER = "run_id,repetition,epoch,train_acc,test_acc,train_loss,gen_error,grad_norm,wall_ms"


def run(*args, cwd=None):
    return subprocess.run([BINARY, *args], capture_output=True, text=True, cwd=cwd)


class Cli(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = self.tmp.name

    def tearDown(self):
        self.tmp.cleanup()

    def path(self, *parts):
        return os.path.join(self.dir, *parts)

    def write_config(self, **extra):
        cfg = {
            "name": "cli",
            "epochs": 2,
            "repetitions": 2,
            "seed": 5,
            "model": {"architecture": "qnnn", "layers": 1, "gradient": "adjoint"},
            "data": {"kind": "synthetic", "n_features": 4, "n_per_class": 10},
            "optimizer": {"kind": "sgd", "learning_rate": 0.05, "batch_size": 4},
        }
        cfg.update(extra)
        p = self.path("cfg.json")
        with open(p, "w") as f:
            json.dump(cfg, f)
        return p

    def test_generate_synthetic_shape_and_reproducibility(self):
        a, b = self.path("a.csv"), self.path("b.csv")
        self.assertEqual(run("generate-data", "--kind", "synthetic", "--seed", "0", "--out", a).returncode, 0)
        self.assertEqual(run("generate-data", "--kind", "synthetic", "--seed", "0", "--out", b).returncode, 0)
        with open(a, "rb") as fa, open(b, "rb") as fb:
            self.assertEqual(fa.read(), fb.read())
        with open(a) as f:
            rows = list(csv.reader(f))
        data = [r for r in rows if r and not r[0].startswith("#")]
        body = data[1:]
        self.assertEqual(len(body), 400)
        self.assertTrue(all(len(r) == 17 for r in body))
        self.assertEqual(sum(1 for r in body if r[-1] == "1"), 200)

    def test_existing_output_needs_force(self):
        a = self.path("a.csv")
        self.assertEqual(run("generate-data", "--kind", "synthetic", "--out", a).returncode, 0)
        self.assertEqual(run("generate-data", "--kind", "synthetic", "--out", a).returncode, 2)
        self.assertEqual(run("generate-data", "--kind", "synthetic", "--out", a, "--force").returncode, 0)

    def test_wine_missing_source(self):
        r = run("generate-data", "--kind", "wine", "--source", self.path("nope.data"), "--out", self.path("w.csv"))
        self.assertEqual(r.returncode, 1)
        self.assertIn("nope.data", r.stderr)

    def test_wine_from_data_dir(self):
        out = self.path("w.csv")
        r = run("generate-data", "--kind", "wine", "--data-dir", DATA_DIR, "--out", out)
        self.assertEqual(r.returncode, 0, r.stderr)

    def test_train_artifacts_and_report(self):
        cfg = self.write_config()
        out = self.path("run")
        r = run("train", "--config", cfg, "--out", out, "--data-dir", DATA_DIR)
        self.assertEqual(r.returncode, 0, r.stderr)
        for name in ["config.json", "metrics.csv", "summary.json", "manifest.json", "checkpoints/rep_0.json"]:
            self.assertTrue(os.path.exists(os.path.join(out, name)), name)
        with open(os.path.join(out, "metrics.csv")) as f:
            lines = f.read().splitlines()
        self.assertEqual(lines[0], HEADER)
        self.assertEqual(len(lines) - 1, 2 * 3)

        self.assertEqual(run("train", "--config", cfg, "--out", out).returncode, 2)

        again = self.path("run2")
        self.assertEqual(run("train", "--config", cfg, "--out", again, "--data-dir", DATA_DIR).returncode, 0)
        with open(os.path.join(again, "metrics.csv")) as f:
            strip = lambda ls: [l.rsplit(",", 1)[0] for l in ls]
            self.assertEqual(strip(f.read().splitlines()), strip(lines))

        merged = self.path("merged.csv")
        r = run("report", out, again, "--out", merged)
        self.assertEqual(r.returncode, 0, r.stderr)
        with open(merged) as f:
            merged_lines = f.read().splitlines()
        self.assertEqual(merged_lines[0], "run," + HEADER)
        self.assertEqual(len(merged_lines) - 1, 12)

    def test_report_without_runs(self):
        self.assertEqual(run("report").returncode, 2)

    def test_config_errors(self):
        cfg = self.write_config()
        r = run("train", "--config", cfg, "--set", "model.bogus=1", "--out", self.path("x"))
        self.assertEqual(r.returncode, 2)
        self.assertIn("model.bogus", r.stderr)
        r = run("train", "--config", self.path("missing.json"), "--out", self.path("y"))
        self.assertNotEqual(r.returncode, 0)

    def test_gradcheck(self):
        r = run("gradcheck", "--seed", "1", "--draws", "3")
        self.assertEqual(r.returncode, 0, r.stdout + r.stderr)
        self.assertIn("PASS", r.stdout)
        self.assertEqual(run("gradcheck", "--arch", "nope").returncode, 2)

    def test_sweep(self):
        cfg = self.write_config(epochs=1)
        out = self.path("sweep")
        r = run("sweep", "--config", cfg, "--axis", "batch_size", "--values", "2,4", "--out", out, "--data-dir", DATA_DIR)
        self.assertEqual(r.returncode, 0, r.stderr)
        self.assertTrue(os.path.exists(os.path.join(out, "sweep.csv")))
        self.assertTrue(os.path.exists(os.path.join(out, "batch_size=2", "metrics.csv")))
        self.assertEqual(run("sweep", "--config", cfg, "--axis", "depth", "--values", "1", "--out", self.path("s2")).returncode, 2)

    def test_unknown_subcommand(self):
        self.assertNotEqual(run("frobnicate").returncode, 0)


if __name__ == "__main__":
    unittest.main(argv=sys.argv[:1], verbosity=2)
