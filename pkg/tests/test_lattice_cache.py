import json

from hurwitz_engine.services.lattice_cache import (
    FORMAT_VERSION,
    LatticeCache,
    get_lattice_cache,
    reset_lattice_cache,
    table_key,
)
from hurwitz_engine.services.subgroup_lattice import enumerate_lattice


def test_table_key_is_stable(s3, b2):
    key = table_key(s3.reflection_multiplication_table())
    assert key == table_key(s3.reflection_multiplication_table())
    assert key != table_key(b2.reflection_multiplication_table())
    assert len(key) == 64


def test_memory_round_trip():
    cache = LatticeCache()
    assert cache.get("abc") is None
    cache.set("abc", {"group": "S3", "masks": [0, 1]})
    record = cache.get("abc")
    assert record["masks"] == [0, 1]
    assert record["version"] == FORMAT_VERSION
    assert cache.get_stats()["hits"] == 1
    assert cache.get_stats()["misses"] == 1


def test_disk_round_trip(tmp_path):
    LatticeCache(tmp_path).set("k" * 64, {"group": "B2"})
    fresh = LatticeCache(tmp_path)
    assert fresh.get("k" * 64)["group"] == "B2"
    assert not list(tmp_path.glob(".lattice-*.tmp"))


def test_stale_and_corrupt_files_miss(tmp_path):
    cache = LatticeCache(tmp_path)
    key = "s" * 64
    cache.set(key, {"group": "A2"})
    path = next(tmp_path.glob("lattice-*.json"))
    path.write_text(json.dumps({"version": FORMAT_VERSION + 1, "key": key}), encoding="utf-8")
    assert LatticeCache(tmp_path).get(key) is None
    path.write_text("{not json", encoding="utf-8")
    assert LatticeCache(tmp_path).get(key) is None


def test_disabled_cache(tmp_path):
    cache = LatticeCache(tmp_path, enabled=False)
    cache.set("abc", {"group": "A2"})
    assert cache.get("abc") is None
    assert not list(tmp_path.iterdir())


def test_delete_and_clear(tmp_path):
    cache = LatticeCache(tmp_path)
    cache.set("abc", {"group": "A2"})
    cache.set("def", {"group": "B2"})
    assert cache.delete("abc")
    assert not cache.delete("abc")
    cache.clear()
    assert cache.get_stats()["entries"] == 0


def test_global_instance(tmp_path):
    reset_lattice_cache()
    first = get_lattice_cache(tmp_path)
    assert get_lattice_cache(tmp_path / "other") is first
    reset_lattice_cache()
    assert get_lattice_cache(tmp_path) is not first
    reset_lattice_cache()


def test_enumerate_lattice_uses_cache(tmp_path, b2):
    built = enumerate_lattice(b2, cache=LatticeCache(tmp_path))
    assert len(list(tmp_path.glob("lattice-*.json"))) == 1
    loaded = enumerate_lattice(b2, cache=LatticeCache(tmp_path))
    assert loaded.mobius == built.mobius
    assert loaded.count_full(b2.identity, 4) == 48
