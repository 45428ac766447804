#!/usr/bin/env python3
# Copyright 2026 The XINE Simulator Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Regenerates the shipped scenario artifacts.

Writes the boot images, the golden measurement files and the Ed25519
signatures into each scenario's config.json. Everything is derived from fixed
labels and the committed demo vendor seed, so running it twice is a no-op.
"""

import hashlib
import json
import pathlib

from cryptography.hazmat.primitives.asymmetric.ed25519 import Ed25519PrivateKey
from cryptography.hazmat.primitives.serialization import Encoding, PublicFormat

ROOT = pathlib.Path(__file__).resolve().parent.parent / "scenarios"
LAYERS = ("epa", "ce", "re")
IMAGE_SIZES = {"epa": 2048, "ce": 1536, "re": 4096}


def stream(label: str, n: int) -> bytes:
    out = b""
    counter = 0
    while len(out) < n:
        out += hashlib.sha256(f"{label}:{counter}".encode()).digest()
        counter += 1
    return out[:n]


def canonical_memory_map(config: dict) -> str:
    lines = []
    for r in config["memory_map"]:
        base = int(r["base"], 0) if isinstance(r["base"], str) else r["base"]
        size = int(r["size"], 0) if isinstance(r["size"], str) else r["size"]
        lines.append(f"{r['label']} {r['kind']} {base:08x} {size:08x}\n")
    return "".join(lines)


def layer_code(config: dict, scenario_dir: pathlib.Path, layer: str) -> bytes:
    image = next(i for i in config["boot"]["images"] if i["layer"] == layer)
    code = (scenario_dir / image["path"]).read_bytes()
    if layer == "epa":
        code += hashlib.sha256(canonical_memory_map(config).encode()).digest()
    return code


def main() -> None:
    images = ROOT / "qr_payment" / "images"
    images.mkdir(parents=True, exist_ok=True)
    for layer in LAYERS:
        (images / f"{layer}.bin").write_bytes(stream(f"xine-{layer}-image", IMAGE_SIZES[layer]))
    tampered = bytearray((images / "ce.bin").read_bytes())
    tampered[100] ^= 0x08
    (ROOT / "tampered_ce" / "ce_tampered.bin").write_bytes(bytes(tampered))

    seed = bytes.fromhex((ROOT / "keys" / "vendor_demo.seed").read_text().strip())
    key = Ed25519PrivateKey.from_private_bytes(seed)
    pub = key.public_key().public_bytes(Encoding.Raw, PublicFormat.Raw).hex()

    # Golden values always come from the untampered qr_payment images.
    qr_dir = ROOT / "qr_payment"
    qr_config = json.loads((qr_dir / "config.json").read_text())
    golden = {layer: hashlib.sha256(layer_code(qr_config, qr_dir, layer)).digest()
              for layer in LAYERS}

    for name in ("qr_payment", "tampered_ce", "adversarial"):
        scenario_dir = ROOT / name
        path = scenario_dir / "config.json"
        config = json.loads(path.read_text())
        assert canonical_memory_map(config) == canonical_memory_map(qr_config)
        (scenario_dir / config["boot"]["measurements"]).write_text(
            "".join(f"{golden[layer].hex()}  {layer}\n" for layer in LAYERS))
        for image in config["boot"]["images"]:
            image["signature"] = key.sign(golden[image["layer"]]).hex()
            image["signer"] = "vendor"
        config["pubkeys"] = {"vendor": pub}
        path.write_text(json.dumps(config, indent=2) + "\n")


if __name__ == "__main__":
    main()
