"""Smoke tests for the python module; run with the build dir on argv[1]."""

import sys
import tempfile

if len(sys.argv) > 1:
    sys.path.insert(0, sys.argv[1])

import _growlsm as g  # noqa: E402


def check(cond, msg):
    if not cond:
        raise AssertionError(msg)


def main():
    check(g.binomial(8, 3) == 56, "binomial")
    check(g.smallest_k(6, 2) == 3, "smallest_k")
    check(g.find_m(10, 3) == 4, "find_m")

    cost, seq = g.tau(6, 2, 1)
    check(cost == 8, "tau(6,2)")
    check(g.tau_closed(6, 2) == 8, "tau_closed")
    replay = g.verify_sequence(seq, 6, 2, 1, "read")
    check(replay["read_cost"] == 8, "verify tau sequence")

    wcost, _ = g.write_dp(6, 2)
    check(wcost == 14, "write_dp(6,2)")
    check(g.brute_force(3, 2, 1, "write") == 5, "brute force write")

    check(abs(g.update_cost_leveling(6, 2, 1) - 14.0 / 6.0) < 1e-12, "W_l")
    check(abs(g.optimal_t_prime(6) - 6 / 2 ** 0.5) < 1e-9, "t_prime")
    check(g.skew_delta(0.9) == 3, "skew_delta")
    policy, levels = g.tune(0.9, 0.1, 0.0, 100, 4, 0.1)
    check(policy == "tiering", "tune policy")
    check(levels >= 2, "tune levels")

    engine = g.Engine(buffer_entries=4, page_entries=4, bits_per_key=0,
                      scheme={"kind": "horizontal_tiering", "levels": 2, "k": 3})
    for i in range(24):
        engine.put("k%015d" % i, "v%d" % i)
    check(engine.get("k%015d" % 3) == "v3", "engine get")
    check(engine.get("missing") is None, "engine miss")
    rows = engine.scan("k", "l")
    check(len(rows) == 24, "engine scan")
    check(engine.flush_count() == 6, "flush count")
    check(engine.level_runs(2) == 3, "run count at flush 6")

    with tempfile.TemporaryDirectory() as tmp:
        engine.persist(tmp)
        reopened = g.Engine(buffer_entries=4, page_entries=4, bits_per_key=0,
                            data_dir=tmp,
                            scheme={"kind": "horizontal_tiering", "levels": 2, "k": 3})
        check(reopened.scan("k", "l") == rows, "persist round trip")
        reopened.close()

    report = g.run_bench(
        {"buffer_entries": 16, "page_entries": 8, "bits_per_key": 5,
         "scheme": {"kind": "vertical", "size_ratio": 4}},
        {"op_count": 2000, "w": 0.5, "r": 0.5, "key_space": 5000, "seed": 7})
    check(report["ops"] == 2000, "bench ops")
    check(report["worst_window_throughput"] <= report["avg_throughput"] + 1e-12,
          "window <= avg")

    print("python smoke ok")


if __name__ == "__main__":
    main()
