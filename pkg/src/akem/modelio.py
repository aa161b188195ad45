"""Binary model files.

Layout (all integers little-endian; see ``docs/model_format.md``)::

    magic      8 bytes   b"AKEMMODL"
    version    u16       FORMAT_VERSION
    reserved   u16       0
    n_sections u32
    n_sections x { tag 4 bytes, length u64, payload <length> bytes }
    crc32      u32       over every preceding byte

Sections are ``b"SVR "`` and ``b"MART"``.  Floats are stored as IEEE-754
doubles so a round trip reproduces predictions bit for bit.
"""

from __future__ import annotations

import struct
import zlib
from pathlib import Path

import numpy as np

from .errors import CorruptModel, VersionMismatch
from .scoring import MartModel, MartParams, ModelBundle, RegressionTree, SvrModel, SvrParams

MAGIC = b"AKEMMODL"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<8sHHI")
_SECTION = struct.Struct("<4sQ")
_CRC = struct.Struct("<I")

TAG_SVR = b"SVR "
TAG_MART = b"MART"


class _Reader:
    def __init__(self, buf: bytes):
        self.buf = buf
        self.pos = 0

    def take(self, fmt: str):
        s = struct.Struct("<" + fmt)
        if self.pos + s.size > len(self.buf):
            raise CorruptModel("model payload is truncated")
        vals = s.unpack_from(self.buf, self.pos)
        self.pos += s.size
        return vals if len(vals) > 1 else vals[0]

    def doubles(self, n: int) -> np.ndarray:
        s = struct.Struct(f"<{n}d")
        if self.pos + s.size > len(self.buf):
            raise CorruptModel("model payload is truncated")
        out = np.array(s.unpack_from(self.buf, self.pos), dtype=np.float64)
        self.pos += s.size
        return out

    def done(self):
        if self.pos != len(self.buf):
            raise CorruptModel("trailing bytes in model section")


def _pack_svr(m: SvrModel) -> bytes:
    p = m.params
    w = np.asarray(m.weights, dtype=np.float64)
    return b"".join([
        struct.pack("<I", len(w)),
        struct.pack(f"<{len(w)}d", *w),
        struct.pack("<ddddIq", m.bias, p.C, p.epsilon, p.learning_rate, p.epochs, p.seed),
    ])


def _unpack_svr(buf: bytes) -> SvrModel:
    r = _Reader(buf)
    n = r.take("I")
    w = r.doubles(n)
    bias, C, eps, lr, epochs, seed = r.take("ddddIq")
    r.done()
    try:
        params = SvrParams(C=C, epsilon=eps, epochs=epochs, seed=seed, learning_rate=lr)
    except ValueError as exc:
        raise CorruptModel(str(exc)) from None
    return SvrModel(w, bias, params)


def _pack_tree(t: RegressionTree) -> bytes:
    n = t.n_nodes
    parts = [struct.pack("<I", n)]
    for i in range(n):
        parts.append(struct.pack("<iqqdd", int(t.feature[i]), int(t.left[i]), int(t.right[i]),
                                 float(t.threshold[i]), float(t.value[i])))
    return b"".join(parts)


def _unpack_tree(r: _Reader) -> RegressionTree:
    n = r.take("I")
    feature, left, right, thr, val = [], [], [], [], []
    for _ in range(n):
        f, lo, hi, th, v = r.take("iqqdd")
        if f >= 0 and not (0 <= lo < n and 0 <= hi < n):
            raise CorruptModel("tree child index out of range")
        feature.append(f)
        left.append(lo)
        right.append(hi)
        thr.append(th)
        val.append(v)
    if n == 0:
        raise CorruptModel("empty tree")
    return RegressionTree(
        np.array(feature, dtype=np.int64), np.array(thr, dtype=np.float64),
        np.array(left, dtype=np.int64), np.array(right, dtype=np.int64),
        np.array(val, dtype=np.float64),
    )


def _pack_mart(m: MartModel) -> bytes:
    p = m.params
    parts = [
        struct.pack("<ddIIIdq", m.learning_rate, m.base_score, p.n_trees, p.max_depth, p.min_leaf,
                    p.learning_rate, p.seed),
        struct.pack("<I", len(m.trees)),
    ]
    parts.extend(_pack_tree(t) for t in m.trees)
    return b"".join(parts)


def _unpack_mart(buf: bytes) -> MartModel:
    r = _Reader(buf)
    lr, base, n_trees, depth, min_leaf, plr, seed = r.take("ddIIIdq")
    count = r.take("I")
    trees = [_unpack_tree(r) for _ in range(count)]
    r.done()
    try:
        params = MartParams(n_trees=n_trees, max_depth=depth, min_leaf=min_leaf, learning_rate=plr, seed=seed)
    except ValueError as exc:
        raise CorruptModel(str(exc)) from None
    return MartModel(trees, lr, base, params)


def dumps(model) -> bytes:
    """Serialize an :class:`SvrModel`, :class:`MartModel` or :class:`ModelBundle`."""
    if isinstance(model, ModelBundle):
        sections = [(TAG_SVR, _pack_svr(model.svr)), (TAG_MART, _pack_mart(model.mart))]
    elif isinstance(model, SvrModel):
        sections = [(TAG_SVR, _pack_svr(model))]
    elif isinstance(model, MartModel):
        sections = [(TAG_MART, _pack_mart(model))]
    else:
        raise TypeError(f"cannot serialize {type(model).__name__}")
    body = bytearray(_HEADER.pack(MAGIC, FORMAT_VERSION, 0, len(sections)))
    for tag, payload in sections:
        body += _SECTION.pack(tag, len(payload))
        body += payload
    body += _CRC.pack(zlib.crc32(body))
    return bytes(body)


def loads(data: bytes):
    if len(data) < _HEADER.size + _CRC.size:
        raise CorruptModel("model file is truncated")
    magic, version, _, n_sections = _HEADER.unpack_from(data, 0)
    if magic != MAGIC:
        raise CorruptModel("not a model file (bad magic)")
    if version != FORMAT_VERSION:
        raise VersionMismatch(f"model format version {version}, expected {FORMAT_VERSION}")
    (crc,) = _CRC.unpack_from(data, len(data) - _CRC.size)
    if zlib.crc32(data[: -_CRC.size]) != crc:
        raise CorruptModel("checksum mismatch (truncated or damaged file)")
    pos = _HEADER.size
    end = len(data) - _CRC.size
    found = {}
    for _ in range(n_sections):
        if pos + _SECTION.size > end:
            raise CorruptModel("section header is truncated")
        tag, length = _SECTION.unpack_from(data, pos)
        pos += _SECTION.size
        if pos + length > end:
            raise CorruptModel("section payload is truncated")
        payload = data[pos:pos + length]
        pos += length
        if tag == TAG_SVR:
            found["svr"] = _unpack_svr(payload)
        elif tag == TAG_MART:
            found["mart"] = _unpack_mart(payload)
        else:
            raise CorruptModel(f"unknown section tag {tag!r}")
    if pos != end:
        raise CorruptModel("unexpected bytes after last section")
    if set(found) == {"svr", "mart"}:
        return ModelBundle(found["svr"], found["mart"])
    if len(found) == 1:
        return next(iter(found.values()))
    raise CorruptModel("model file has no usable sections")


def save_model(path, model) -> None:
    Path(path).write_bytes(dumps(model))


def load_model(path):
    return loads(Path(path).read_bytes())
