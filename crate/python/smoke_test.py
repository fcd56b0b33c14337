"""Smoke test for the parsssp_py extension.

Builds the extension with cargo when it is not importable, then checks a few
runs against the bundled Dijkstra oracle.

    python3 python/smoke_test.py
"""

import pathlib
import shutil
import subprocess
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent


def import_extension():
    try:
        import parsssp_py
        return parsssp_py
    except ImportError:
        pass
    subprocess.run(
        ["cargo", "build", "--release", "-p", "parsssp-py", "--features", "extension-module"],
        cwd=ROOT,
        check=True,
    )
    lib = ROOT / "target" / "release" / "libparsssp_py.so"
    if not lib.exists():
        lib = ROOT / "target" / "release" / "libparsssp_py.dylib"
    out = pathlib.Path(tempfile.mkdtemp())
    shutil.copy(lib, out / "parsssp_py.so")
    sys.path.insert(0, str(out))
    import parsssp_py
    return parsssp_py


def main():
    p = import_extension()

    chain = p.Graph(5, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 4, 1)])
    assert (chain.n, chain.m) == (5, 8)
    dist, stats = p.run_sssp(chain, 0, "bellman-ford")
    assert dist == [0, 1, 2, 3, 4]
    assert stats["steps"] == 5

    edges = []
    state = 12345
    for _ in range(3000):
        state = (state * 6364136223846793005 + 1442695040888963407) % 2**64
        u, v, w = state % 500, (state >> 20) % 500, 1 + (state >> 40) % 1000
        if u != v:
            edges.append((u, v, w))
    g = p.Graph(500, edges)
    want, hops, k_n = p.dijkstra(g, 0)
    runs = [
        dict(algo="dijkstra"),
        dict(algo="delta-star", delta=500),
        dict(algo="rho", rho=32),
        dict(algo="rho", rho=32, selector="exact", backend="array"),
        dict(algo="radius", rho=8),
    ]
    for kw in runs:
        got, stats = p.run_sssp(g, 0, **kw)
        assert got == want, kw
        assert stats["max_extractions"] <= max(k_n, 1), kw
    assert p.checksum(got) == p.checksum(want)

    est = p.k_rho(g, 10, exact=True)
    assert est["exact"] and est["k_rho_hat"] >= 1
    assert p.r_rho(g, 1) == [0] * g.n

    pq = p.LabPq(10)
    for i, key in enumerate([5, 3, 9, 1]):
        pq.set_key(i, key)
        pq.update(i)
    assert len(pq) == 4 and pq.min_key() == 1
    assert pq.extract(4) == [1, 3]
    assert pq.queued() == [0, 2]

    try:
        p.run_sssp(g, 0, "delta")
    except ValueError:
        pass
    else:
        raise AssertionError("delta without a width must fail")

    print("smoke test passed")


if __name__ == "__main__":
    main()
