import numpy as np
import pytest

from rarebit.polynomials import IntPolynomial
from rarebit.seqfile import (
    MAGIC,
    SequenceCache,
    SequenceFileError,
    decode,
    default_cache_dir,
    encode,
    read_sequence,
    symbol_width,
    write_sequence,
)
from rarebit.sequences import GeneratorDescriptor, Sequence, generate_prefix


def test_thue_morse_payload_bytes():
    blob = encode(generate_prefix(GeneratorDescriptor.thue_morse(), 16))
    assert blob.startswith(MAGIC + b"\n")
    # 0110100110010110 packed least significant bit first
    assert blob.endswith(b"\x96\x69")
    assert blob.count(b"\n") >= 2


@pytest.mark.parametrize("m,width", [(2, 1), (3, 2), (4, 2), (5, 3), (16, 4), (17, 5)])
def test_symbol_width(m, width):
    assert symbol_width(m) == width


@pytest.mark.parametrize("m", [2, 3, 4, 7, 16, 300])
@pytest.mark.parametrize("length", [1, 7, 8, 9, 100])
def test_round_trip(m, length, rng):
    seq = Sequence(rng.integers(0, m, length), m)
    back = decode(encode(seq, "tm"))
    assert back == seq
    assert back.m == m


def test_provenance_round_trip(tmp_path):
    g = GeneratorDescriptor.general(3, 4, "21", IntPolynomial((0, 0, 1)))
    seq = generate_prefix(g, 77)
    write_sequence(tmp_path / "a.rbsq", seq)
    back = read_sequence(tmp_path / "a.rbsq")
    assert back.provenance == g
    assert np.array_equal(back.symbols, seq.symbols)


def test_corrupt_files(tmp_path):
    with pytest.raises(SequenceFileError):
        decode(b"NOPE\n{}\n")
    good = encode(Sequence.from_bits("0110"), "tm")
    with pytest.raises(SequenceFileError):
        decode(good[:-1])
    with pytest.raises(SequenceFileError):
        decode(good.replace(b'"m": 2', b'"m": 9'))
    with pytest.raises(SequenceFileError):
        decode(MAGIC + b"\n{not json\n\x00")


def test_out_of_alphabet_payload():
    blob = encode(Sequence(np.array([0, 1, 2]), 3), "")
    bad = blob[:-1] + bytes([0b111111])
    with pytest.raises(SequenceFileError):
        decode(bad)


def test_cache_hit_is_byte_identical(tmp_path):
    cache = SequenceCache(tmp_path)
    data = encode(generate_prefix(GeneratorDescriptor.pattern(2), 1000))
    assert cache.get("pattern:k=2", 1000) is None
    cache.put("pattern:k=2", 1000, data)
    assert cache.get("pattern:k=2", 1000) == data
    assert cache.get("pattern:k=2", 999) is None
    # a second cache object over the same directory sees the entry
    assert SequenceCache(tmp_path).get("pattern:k=2", 1000) == data


def test_cache_rejects_tampered_file(tmp_path):
    cache = SequenceCache(tmp_path)
    digest = cache.put("tm", 8, encode(Sequence.from_bits("01101001"), "tm"))
    (tmp_path / f"{digest}.rbsq").write_bytes(b"garbage")
    assert cache.get("tm", 8) is None


def test_cache_dir_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("RAREBIT_CACHE", str(tmp_path / "c"))
    assert default_cache_dir() == tmp_path / "c"
    monkeypatch.delenv("RAREBIT_CACHE")
    monkeypatch.setenv("XDG_CACHE_HOME", str(tmp_path))
    assert default_cache_dir() == tmp_path / "rarebit"


def test_no_temp_files_left(tmp_path):
    write_sequence(tmp_path / "x.rbsq", Sequence.from_bits("01"), "tm")
    assert [p.name for p in tmp_path.iterdir()] == ["x.rbsq"]
