"""Smoke test for the citelink extension module.

Build and run from the repository root:

    cargo build --release -p citelink-python
    cp target/release/libcitelink.so crates/python/python/citelink.so
    python3 crates/python/python/smoke_test.py
"""

import json
import math
import os
import sys
import tempfile

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import citelink as cl


def check(cond, what):
    if not cond:
        raise SystemExit(f"FAIL: {what}")
    print(f"ok   {what}")


check(cl.normalize_doi("https://doi.org/10.1007/S11192-013-1089-2") == "10.1007/s11192-013-1089-2", "normalize_doi")
check(cl.normalize_doi("not a doi") is None, "normalize_doi rejects junk")
check(cl.normalize_title("  Google Scholar: a new data source?  ") == "google scholar a new data source", "normalize_title")
check(cl.normalize_person("Martín-Martín, A.") == "martin-martin", "normalize_person")
check(cl.classify_doc_type("Proceedings Paper") == "CONFERENCE", "classify_doc_type")
check(cl.osa_distance("ca", "ac") == 1 and cl.osa_distance("ca", "abc") == 3, "osa_distance")
check(cl.accept_match(0.8, 30, 30, False) and not cl.accept_match(0.799, 30, 30, False), "accept_match")

title = "Google Scholar, Web of Science, and Scopus: a systematic comparison"
a = cl.CitingRecord("g1", "GS", "X", title, authors=["A Martín-Martín"])
b = cl.CitingRecord("w1", "WOS", "X", title.upper(), authors=["Martin-Martin, A"], doi="10.1016/j.joi.2018.09.002")
c = cl.CitingRecord("s1", "SCOPUS", "X", "Something else entirely about citation analysis", doi="10.1016/j.joi.2018.09.002")
edges, clusters = cl.link_block([a, b, c])
check(len(edges) == 2, "link_block edges")
check(len(clusters) == 1 and sorted(clusters[0].presence) == ["GS", "SCOPUS", "WOS"], "link_block cluster")
regions = cl.partition_regions(clusters)
check(regions["GWS"] == 1 and regions["total"] == 1, "partition_regions")
cov = cl.coverage_metrics({"G": 3, "W": 1, "S": 1, "GW": 1, "GSc": 1, "WS": 1, "GWS": 2})
check(cov["pct_gs_all"] == 70.0 and cov["pct_wos_in_gs"] == 60.0, "coverage_metrics")

check(cl.spearman([1, 2, 3], [10, 20, 30]) == 1.0, "spearman")
check(cl.spearman([1, 1, 1], [1, 2, 3]) is None, "spearman constant")
check(cl.mean_ratio([(9, 4), (0, 0)]) == 1.5, "mean_ratio")
s = cl.log_summary([math.e - 1])
check(abs(s["mean"] - 1.0) < 1e-12 and s["ci_half_width"] == 0.0, "log_summary")
corr = cl.apply_correction({"JOURNAL": 0.335, "BOOK": 0.465}, 0.2, {"JOURNAL": 0.276, "BOOK": 0.724})
check(abs(corr["JOURNAL"] - 0.390) <= 0.0005, "apply_correction")

records, rejects = cl.parse_wos_export(b"UT\tTI\tPY\nW1\tA title\t2015\n", cited_doc_id="X")
check(len(records) == 1 and records[0].year == 2015 and rejects == [], "parse_wos_export")
try:
    cl.MatchPolicy(high_sim_threshold=1.01)
    check(False, "MatchPolicy validation")
except ValueError:
    check(True, "MatchPolicy validation")

with tempfile.TemporaryDirectory() as tmp:
    spec = {"cited_docs": 5, "records": 200, "proportions": {"GWS": 0.5, "G": 0.5}, "seed": 1}
    n = cl.synth(json.dumps(spec), tmp)
    check(n > 0, "synth")
    summary = json.loads(cl.run_pipeline(os.path.join(tmp, "pipeline.json")))
    check(summary["match"]["records"] == n, "run_pipeline")

print("all smoke checks passed")
