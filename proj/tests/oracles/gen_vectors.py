# Copyright 2026 The Arca Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Independent reference for the frozen .vec files under tests/testdata.

Built on pycryptodome (AES-GCM, HMAC, HKDF, SHA-256) and pyca/cryptography
(X25519, Ed25519); shares no code with the C++ tree. Run once and commit
the output:

    python3 tests/oracles/gen_vectors.py tests/testdata
"""

import hashlib
import os
import random
import struct
import sys

from Crypto.Cipher import AES
from Crypto.Hash import HMAC, SHA256
from Crypto.Protocol.KDF import HKDF
from cryptography.hazmat.primitives import serialization
from cryptography.hazmat.primitives.asymmetric import ed25519, x25519

RAW = serialization.Encoding.Raw
RAW_PUB = serialization.PublicFormat.Raw


def hkdf(secret, context, label, n):
    return HKDF(secret, n, label, SHA256, context=context)


def hmac(key, data):
    return HMAC.new(key, data, SHA256).digest()


def gcm_seal(key, nonce, pt, aad):
    c = AES.new(key, AES.MODE_GCM, nonce=nonce)
    c.update(aad)
    ct, tag = c.encrypt_and_digest(pt)
    return ct, tag


def x_pub(seed):
    return x25519.X25519PrivateKey.from_private_bytes(seed).public_key().public_bytes(RAW, RAW_PUB)


def x_shared(seed, peer):
    return x25519.X25519PrivateKey.from_private_bytes(seed).exchange(
        x25519.X25519PublicKey.from_public_bytes(peer))


def ed_pub(seed):
    return ed25519.Ed25519PrivateKey.from_private_bytes(seed).public_key().public_bytes(RAW, RAW_PUB)


def ed_sign(seed, msg):
    return ed25519.Ed25519PrivateKey.from_private_bytes(seed).sign(msg)


def measure(components):
    def enc(p):
        return struct.pack(">Q", len(p)) + p
    d = hashlib.sha256(enc(components[0])).digest()
    for p in components[1:]:
        d = hashlib.sha256(d + enc(p)).digest()
    return d


class VecWriter:
    def __init__(self, path, title):
        self.f = open(path, "w")
        self.f.write("# " + title + "\n# Generated by tests/oracles/gen_vectors.py\n")

    def record(self, **fields):
        self.f.write("\n")
        for k, v in fields.items():
            if isinstance(v, (bytes, bytearray)):
                v = v.hex()
            self.f.write(f"{k} = {v}\n")

    def close(self):
        self.f.close()


def rb(rng, n):
    return bytes(rng.getrandbits(8) for _ in range(n))


def primitives(out, rng):
    w = VecWriter(os.path.join(out, "primitives", "aes128gcm.vec"), "AES-128-GCM")
    for n in [0, 1, 15, 16, 17, 64, 255]:
        key, nonce, aad, pt = rb(rng, 16), rb(rng, 12), rb(rng, rng.randrange(0, 40)), rb(rng, n)
        ct, tag = gcm_seal(key, nonce, pt, aad)
        w.record(key=key, nonce=nonce, aad=aad, pt=pt, ct=ct, tag=tag)
    w.close()

    w = VecWriter(os.path.join(out, "primitives", "hkdf.vec"), "HKDF-SHA256, salt = label, info = context")
    for n in [16, 32, 48, 64]:
        secret, context = rb(rng, 32), rb(rng, rng.randrange(0, 80))
        label = "label-%d" % rng.randrange(1000)
        w.record(secret=secret, context=context, label=label, len=n,
                 out=hkdf(secret, context, label.encode(), n))
    w.close()

    w = VecWriter(os.path.join(out, "primitives", "hmac_sha256.vec"), "HMAC-SHA256")
    for n in [0, 3, 64, 200]:
        key, msg = rb(rng, 32), rb(rng, n)
        w.record(key=key, msg=msg, mac=hmac(key, msg))
    w.close()

    w = VecWriter(os.path.join(out, "primitives", "ed25519.vec"), "Ed25519 from 32-byte seed")
    for n in [0, 32, 114]:
        seed, msg = rb(rng, 32), rb(rng, n)
        w.record(seed=seed, pub=ed_pub(seed), msg=msg, sig=ed_sign(seed, msg))
    w.close()

    w = VecWriter(os.path.join(out, "primitives", "x25519.vec"), "X25519")
    for _ in range(3):
        a, b = rb(rng, 32), rb(rng, 32)
        w.record(seed_a=a, pub_a=x_pub(a), seed_b=b, pub_b=x_pub(b), shared=x_shared(a, x_pub(b)))
    w.close()


def measurements(out, rng):
    w = VecWriter(os.path.join(out, "measurement.vec"),
                  "Measurement fold; components are hex payloads joined by ','")
    for count in [1, 2, 5, 16]:
        comps = [rb(rng, rng.randrange(0, 300)) for _ in range(count)]
        w.record(components=",".join(c.hex() for c in comps),
                 count=count, digest=measure(comps))
    w.close()


def keyhier(out, rng):
    w = VecWriter(os.path.join(out, "keyhier.vec"),
                  "Key hierarchy: context = measurement || u64 svn || domain id")
    for _ in range(4):
        root, mdigest, dom = rb(rng, 32), rb(rng, 32), rb(rng, 32)
        svn = rng.randrange(0, 1 << 40)
        ctx = mdigest + struct.pack(">Q", svn) + dom
        seal = hkdf(root, ctx, b"seal", 32)
        session = hkdf(root, ctx, b"session", 32)
        attest_pub = ed_pub(hkdf(root, ctx, b"attest", 32))
        dh_pub = x_pub(hkdf(root, ctx, b"session-dh", 32))
        w.record(root=root, measurement=mdigest, svn=svn, domain=dom, seal=seal,
                 session=session, attest_pub=attest_pub, session_dh_pub=dh_pub)
    w.close()


def frame(enc, mac, direction, seq, pt):
    header = b"ARCF" + bytes([1, direction]) + struct.pack(">Q", seq)
    nonce = bytes([direction]) * 4 + struct.pack(">Q", seq)
    ct, tag = gcm_seal(enc, nonce, pt, header)
    body = header + nonce + struct.pack(">I", len(ct)) + ct + tag
    return body + hmac(mac, body[4:])


def channel(out, rng):
    w = VecWriter(os.path.join(out, "channel_frames.vec"),
                  "Session frames after a handshake between two X25519 seeds")
    for case in range(3):
        si, sr, mdigest = rb(rng, 32), rb(rng, 32), rb(rng, 32)
        profile = case % 3
        pi, pr = x_pub(si), x_pub(sr)
        z = x_shared(si, pr)
        keys = {lbl: hkdf(z, mdigest, lbl.encode(), 16 if lbl.endswith("enc") else 32)
                for lbl in ["c2s-enc", "c2s-mac", "s2c-enc", "s2c-mac", "confirm"]}
        transcript = b"arca-handshake-v1" + pi + pr + mdigest + bytes([profile])
        hello_i = b"ARCH" + bytes([1, 0]) + pi + hmac(keys["confirm"], transcript + b"\x00")
        hello_r = b"ARCH" + bytes([1, 1]) + pr + hmac(keys["confirm"], transcript + b"\x01")
        sends = []
        for i in range(4):
            sends.append((0, i, rb(rng, [0, 1, 37, 1024][i])))
        for i in range(2):
            sends.append((1, i, rb(rng, [5, 300][i])))
        w.record(case=case, seed_i=si, seed_r=sr, measurement=mdigest, profile=profile,
                 hello_i=hello_i, hello_r=hello_r)
        for direction, seq, pt in sends:
            pfx = "c2s" if direction == 0 else "s2c"
            w.record(case=case, direction=direction, seq=seq, pt=pt,
                     frame=frame(keys[pfx + "-enc"], keys[pfx + "-mac"], direction, seq, pt))
    w.close()


def main():
    out = sys.argv[1] if len(sys.argv) > 1 else "tests/testdata"
    os.makedirs(os.path.join(out, "primitives"), exist_ok=True)
    rng = random.Random(20261014)
    primitives(out, rng)
    measurements(out, rng)
    keyhier(out, rng)
    channel(out, rng)


if __name__ == "__main__":
    main()
