"""Smoke test of the Python bindings.

Build first:
    cargo build --release -p betatile-py --features extension-module
then run:
    python3 python/smoke_test.py
"""

import importlib.util
import os
import shutil
import sys
import tempfile

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def load():
    lib = os.environ.get("BETATILE_PY_LIB", os.path.join(ROOT, "target", "release", "libbetatile_py.so"))
    tmp = tempfile.mkdtemp()
    dst = os.path.join(tmp, "betatile_py.so")
    shutil.copy(lib, dst)
    spec = importlib.util.spec_from_file_location("betatile_py", dst)
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    return mod


def main():
    bt = load()
    golden = bt.Transform('{"preset":"greedy","field":[1,1]}')
    assert abs(golden.beta() - (1 + 5 ** 0.5) / 2) < 1e-12
    # 1/β = β − 1 has expansion 1 0^ω
    pre, per = golden.expand(["-1", "1"])
    assert (pre, per) == ([1], [0]), (pre, per)
    assert golden.v_set() == [["0", "0"], ["-1", "1"]]
    assert golden.periodic_points() == [["0", "0"]]
    assert golden.check_f()
    assert golden.forbidden_words() == [[1, 1]]
    assert golden.decide_tiling() == "tiling"
    assert abs(golden.natext_area(16) - 1.0) < 0.02

    trib = bt.Transform('{"preset":"symmetric","field":[1,1,1],"restrict":true}')
    assert trib.decide_tiling() == "multiple"
    assert len(trib.tiles_containing(["4", "0", "0"])) == 2

    try:
        golden.expand(["5", "0"])
    except ValueError:
        pass
    else:
        raise AssertionError("point outside X accepted")
    print("python smoke test: ok")


if __name__ == "__main__":
    sys.exit(main())
