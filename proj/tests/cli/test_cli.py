"""End-to-end tests of the flatk command line tool.

Usage: test_cli.py PATH_TO_FLATK
"""

import hashlib
import json
import os
import subprocess
import sys
import tempfile
import unittest
from pathlib import Path

FLATK = None


def run(*args, cache=None, check_exit=None):
    cmd = [FLATK]
    if cache is None:
        cmd.append("--no-cache")
    else:
        cmd += ["--cache-dir", str(cache)]
    cmd += list(args)
    proc = subprocess.run(cmd, capture_output=True, text=True, timeout=900)
    if check_exit is not None and proc.returncode != check_exit:
        raise AssertionError(f"{cmd} exited {proc.returncode}\nstdout:\n{proc.stdout}\nstderr:\n{proc.stderr}")
    return proc


def run_json(*args, **kw):
    proc = run("--format", "json", *args, **kw)
    return proc.returncode, json.loads(proc.stdout)


def group(rank, torsion=()):
    return {"rank": rank, "torsion": list(torsion)}


class ExitCodes(unittest.TestCase):
    def test_pass(self):
        for args in (["table"], ["lattices", "--check-duality"], ["presentation"],
                     ["serre", "--fiber", "Z", "--t", "0"], ["mirror", "X15", "X212"]):
            with self.subTest(args=args):
                run(*args, check_exit=0)

    def test_usage(self):
        for args in (["bogus"], ["mirror", "X04", "B"], ["splitting", "B"], ["table", "--space", "X99"],
                     ["serre", "--fiber", "M99", "--t", "1"], ["splitting", "X04", "--mod", "3"], []):
            with self.subTest(args=args):
                self.assertEqual(run(*args).returncode, 3)

    def test_resource(self):
        proc = run("splitting", "X04", "--budget-hours", "0")
        self.assertEqual(proc.returncode, 2)
        self.assertIn("--budget", proc.stderr)
        self.assertEqual(run("splitting", "X04", "--budget-gb", "0.001").returncode, 2)


class Outputs(unittest.TestCase):
    def test_group_encoding(self):
        code, doc = run_json("table", "--space", "X212", "--degree", "5")
        self.assertEqual(code, 0)
        self.assertEqual(doc["verdict"], "PASS")
        self.assertEqual(doc["spaces"][0]["cohomology"]["5"], group(0, [2, 2, 4, 4]))

    def test_mirror(self):
        code, doc = run_json("mirror", "X15", "X212")
        self.assertEqual(code, 0)
        self.assertEqual(doc["verdict"], "PASS")
        self.assertEqual(doc["caveat"], "graded comparison only")
        self.assertEqual(doc["grK0_X"], doc["grK1_Xhat"])
        self.assertEqual(doc["grK1_X"], doc["grK0_Xhat"])
        self.assertEqual(doc["torsion_h"]["verdict"], "FAIL")
        first = doc["torsion_h"]["comparisons"][0]
        self.assertEqual(first["tors_X"], group(0, [4, 4, 4]))
        self.assertEqual(first["tors_Xhat"], group(0, [4]))
        # a pair that is not T-dual gets a FAIL verdict without failing the run
        code, doc = run_json("mirror", "X15", "X111")
        self.assertEqual(code, 0)
        self.assertEqual(doc["verdict"], "FAIL")
        self.assertFalse(doc["expected_dual_pair"])

    def test_lattices(self):
        code, doc = run_json("lattices", "--check-duality")
        self.assertEqual(code, 0)
        duals = {row["lattice"]: row["dual_isomorphic_to"] for row in doc["duality"]}
        self.assertEqual(duals, {"M04": ["M04"], "M15": ["M212"], "M111": ["M111"], "M212": ["M15"]})

    def test_serre(self):
        code, doc = run_json("serre", "--fiber", "M15", "--t", "2", "--s", "0")
        self.assertEqual(code, 0)
        self.assertEqual(doc["entries"][0]["group"], group(0))
        code, doc = run_json("serre", "--fiber", "Z", "--t", "0")
        self.assertEqual([e["group"] for e in doc["entries"]], [group(1), group(0), group(0, [4, 4]), group(1)])

    def test_presentation(self):
        code, doc = run_json("presentation")
        self.assertEqual(code, 0)
        self.assertEqual(doc["abelianization"], group(0, [4, 4]))
        self.assertEqual(doc["H1_from_quotient_complex"], group(0, [4, 4]))

    def test_splitting_mod2(self):
        code, doc = run_json("splitting", "X212", "--mod", "2")
        self.assertEqual(code, 0)
        self.assertEqual(doc["ring"], "Z/2")
        self.assertFalse(doc["refinement"]["exists"])
        g = doc["refinement"]["obstruction_generator"]
        self.assertEqual(doc["cup_H2_H2"][g][g], doc["refinement"]["obstruction_value"])
        self.assertTrue(any(v % 2 for v in doc["refinement"]["obstruction_value"]))

    def test_markdown_is_default(self):
        out = run("table", check_exit=0).stdout
        self.assertIn("|", out)
        with self.assertRaises(json.JSONDecodeError):
            json.loads(out)


class Cache(unittest.TestCase):
    def test_cached_output_is_identical(self):
        with tempfile.TemporaryDirectory() as tmp:
            cache = Path(tmp) / "cache"
            for args in (["table"], ["--format", "json", "splitting", "X15"], ["lattices", "--check-duality"]):
                with self.subTest(args=args):
                    fresh = run(*args, check_exit=0).stdout
                    first = run(*args, cache=cache, check_exit=0).stdout
                    second = run(*args, cache=cache, check_exit=0).stdout
                    self.assertEqual(first, fresh)
                    self.assertEqual(second, fresh)
            entries = sorted(cache.rglob("*.json"))
            self.assertEqual(len(entries), 3)
            for path in entries:
                entry = json.loads(path.read_text())
                self.assertEqual(set(entry), {"request", "exit", "output", "timestamp"})
                # key is the SHA-256 of the compact request, sharded by its first two hex digits
                key = hashlib.sha256(json.dumps(entry["request"], separators=(",", ":")).encode()).hexdigest()
                self.assertEqual(path.name, key + ".json")
                self.assertEqual(path.parent.name, key[:2])

    def test_cache_is_read(self):
        with tempfile.TemporaryDirectory() as tmp:
            cache = Path(tmp)
            run("presentation", cache=cache, check_exit=0)
            (path,) = cache.rglob("*.json")
            entry = json.loads(path.read_text())
            entry["output"] = "sentinel\n"
            path.write_text(json.dumps(entry))
            self.assertEqual(run("presentation", cache=cache).stdout, "sentinel\n")
            self.assertNotEqual(run("presentation").stdout, "sentinel\n")
            # a different request does not hit the entry
            self.assertNotEqual(run("--format", "json", "presentation", cache=cache).stdout, "sentinel\n")

    def test_environment_variable(self):
        with tempfile.TemporaryDirectory() as tmp:
            env = dict(os.environ, FLATK_CACHE_DIR=tmp)
            subprocess.run([FLATK, "presentation"], check=True, capture_output=True, env=env, cwd=tmp)
            self.assertEqual(len(list(Path(tmp).rglob("*.json"))), 1)


class Export(unittest.TestCase):
    def test_export(self):
        with tempfile.TemporaryDirectory() as tmp:
            proc = run("splitting", "X15", "--export", tmp, check_exit=0)
            self.assertIn("EXISTS", proc.stdout)
            matrix = Path(tmp) / "X15-Z-cup22.txt"
            manifest = json.loads((Path(tmp) / "X15-Z-cup22.manifest.json").read_text())
            self.assertEqual(manifest["space"], "X15")
            self.assertEqual(manifest["matrix"], matrix.name)
            self.assertTrue(manifest["report"]["refinement"]["exists"])

            lines = matrix.read_text().split()
            rows, cols, nnz = map(int, lines[:3])
            h2 = manifest["report"]["H2"]
            h4 = manifest["report"]["H4"]
            k2 = h2["rank"] + len(h2["torsion"])
            self.assertEqual(rows, k2 * k2)
            self.assertEqual(cols, h4["rank"] + len(h4["torsion"]))
            triples = [tuple(map(int, lines[3 + 3 * i: 6 + 3 * i])) for i in range(nnz)]
            self.assertEqual(len(lines), 3 + 3 * nnz)
            # the matrix agrees with the product table in the report
            dense = [[0] * cols for _ in range(rows)]
            for r, c, v in triples:
                dense[r][c] = v
            table = manifest["report"]["cup_H2_H2"]
            for i in range(k2):
                for j in range(k2):
                    self.assertEqual(dense[i * k2 + j], table[i][j])

    def test_export_bypasses_cache(self):
        with tempfile.TemporaryDirectory() as tmp:
            cache = Path(tmp) / "cache"
            run("splitting", "X15", "--export", str(Path(tmp) / "out"), cache=cache, check_exit=0)
            self.assertEqual(list(cache.rglob("*.json")), [])


if __name__ == "__main__":
    FLATK = os.path.abspath(sys.argv.pop(1))
    unittest.main(verbosity=2)
