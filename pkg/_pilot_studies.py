"""Scratch pilot: run the acceptance-scale studies once and dump summaries."""
import json
import time

import spacereg as sr

OUT = {}

t0 = time.time()
rep6 = sr.run_study(sr.builtin_scenario("parabola-split-uniform"), ("ull", "ulc", "nw"),
                    100, 0)
OUT["ex2"] = {"summary": rep6.summary(), "time": time.time() - t0}
print("ex2 done", OUT["ex2"]["time"])

t0 = time.time()
rep7 = sr.run_study(sr.builtin_scenario("chirp-trig-dependent"), ("ull", "loess1"),
                    100, 0, metrics=("max_error",))
OUT["ex4"] = {"summary": rep7.summary(), "wilcoxon": rep7.wilcoxon, "time": time.time() - t0}
print("ex4 done", OUT["ex4"]["time"])

t0 = time.time()
rep8 = sr.run_study(sr.builtin_scenario("chirp-trig-subsampled"), ("ull", "loess1"),
                    100, 0, metrics=("max_error",))
OUT["ex5"] = {"summary": rep8.summary(), "wilcoxon": rep8.wilcoxon, "time": time.time() - t0}
print("ex5 done", OUT["ex5"]["time"])

t0 = time.time()
rep9 = sr.run_study(sr.builtin_scenario("piecewise-parabolic-density"), ("ull", "nw"),
                    100, 0, metrics=("mse",))
OUT["ex3"] = {"summary": rep9.summary(), "time": time.time() - t0}
print("ex3 done", OUT["ex3"]["time"])

with open("_pilot_results.json", "w") as fh:
    json.dump(OUT, fh, indent=1)
print("ALL DONE")
