import functools
import json

import numpy as np
import pytest

from oodbench import pngio
from oodbench.errors import EmptyInputError, ParameterError
from oodbench.pipeline import (
    Manifest,
    corrupt_dataset,
    derive_seed,
    fnv1a64,
    verify_manifest,
)


def independent_fnv(data: bytes) -> int:
    """Separate FNV-1a transcription used as the hash oracle."""
    return functools.reduce(
        lambda h, b: ((h ^ b) * 0x100000001B3) % 2**64, data, 0xCBF29CE484222325
    )


def test_fnv_against_independent_oracle():
    for blob in (b"", b"a", b"hello world", bytes(range(256))):
        assert fnv1a64(blob) == independent_fnv(blob)


def test_fnv_known_vectors():
    # classic published FNV-1a 64 test values
    assert fnv1a64(b"") == 0xCBF29CE484222325
    assert fnv1a64(b"a") == 0xAF63DC4C8601EC8C


class TestDeriveSeed:
    def test_stable(self):
        assert derive_seed(5, "x.png", "fog", 2) == derive_seed(5, "x.png", "fog", 2)

    def test_components_matter(self):
        base = derive_seed(5, "x.png", "fog", 2)
        assert derive_seed(5, "x.png", "fog", 3) != base
        assert derive_seed(5, "x.png", "snow", 2) != base
        assert derive_seed(5, "y.png", "fog", 2) != base
        assert derive_seed(6, "x.png", "fog", 2) != base

    def test_golden_reference_vector(self):
        # frozen from the independent oracle over "a.png|gaussian_noise|1"
        expect = independent_fnv(b"a.png|gaussian_noise|1") ^ 0
        assert derive_seed(0, "a.png", "gaussian_noise", 1) == expect
        assert expect == 2833008152369665346

    def test_master_seed_is_xor(self):
        h = derive_seed(0, "a.png", "fog", 1)
        assert derive_seed(12345, "a.png", "fog", 1) == h ^ 12345

    def test_empty_path_rejected(self):
        with pytest.raises(ParameterError):
            derive_seed(0, "", "fog", 1)


@pytest.fixture
def dataset(tmp_path):
    rng = np.random.default_rng(3)
    root = tmp_path / "in"
    (root / "deep").mkdir(parents=True)
    (root / "a.png").write_bytes(pngio.write_png(rng.integers(0, 256, (32, 32, 3), dtype=np.uint8)))
    (root / "deep" / "b.png").write_bytes(
        pngio.write_png(rng.integers(0, 256, (24, 40, 3), dtype=np.uint8))
    )
    return root


class TestCorruptDataset:
    def test_full_grid_count(self, dataset, tmp_path):
        manifest = corrupt_dataset(dataset, tmp_path / "o", ["fog", "snow"], [1, 2, 3, 4, 5], 1)
        assert len(manifest.entries) == 2 * 2 * 5
        assert manifest.skipped == []
        for e in manifest.entries:
            assert (tmp_path / "o" / e.output_path).is_file()

    def test_layout_kind_level_relpath(self, dataset, tmp_path):
        manifest = corrupt_dataset(dataset, tmp_path / "o", ["fog"], [3], 1)
        paths = {e.output_path for e in manifest.entries}
        assert paths == {"fog/3/a.png", "fog/3/deep/b.png"}

    def test_same_seed_same_digests(self, dataset, tmp_path):
        m1 = corrupt_dataset(dataset, tmp_path / "o1", ["gaussian_noise"], [5], 42)
        m2 = corrupt_dataset(dataset, tmp_path / "o2", ["gaussian_noise"], [5], 42)
        assert [e.content_digest for e in m1.entries] == [e.content_digest for e in m2.entries]

    def test_jobs_do_not_change_outputs(self, dataset, tmp_path):
        m1 = corrupt_dataset(dataset, tmp_path / "o1", ["fog", "snow", "frost"], [1, 5], 9, jobs=1)
        m8 = corrupt_dataset(dataset, tmp_path / "o2", ["fog", "snow", "frost"], [1, 5], 9, jobs=8)
        strip = lambda m: [(e.relative_path, e.kind, e.level, e.content_digest) for e in m.entries]
        assert strip(m1) == strip(m8)
        assert (tmp_path / "o1" / "manifest.json").read_bytes() == (
            tmp_path / "o2" / "manifest.json"
        ).read_bytes()

    def test_master_seed_changes_outputs(self, dataset, tmp_path):
        m1 = corrupt_dataset(dataset, tmp_path / "o1", ["gaussian_noise"], [3], 1)
        m2 = corrupt_dataset(dataset, tmp_path / "o2", ["gaussian_noise"], [3], 2)
        assert m1.entries[0].content_digest != m2.entries[0].content_digest

    def test_digests_verify_on_disk(self, dataset, tmp_path):
        corrupt_dataset(dataset, tmp_path / "o", ["pixelate"], [2], 1)
        assert verify_manifest(tmp_path / "o") == []

    def test_tampering_detected(self, dataset, tmp_path):
        manifest = corrupt_dataset(dataset, tmp_path / "o", ["pixelate"], [2], 1)
        victim = tmp_path / "o" / manifest.entries[0].output_path
        victim.write_bytes(victim.read_bytes()[:-1] + b"X")
        assert verify_manifest(tmp_path / "o") == [manifest.entries[0].output_path]

    def test_undecodable_image_skipped(self, dataset, tmp_path):
        (dataset / "broken.jpg").write_bytes(b"junk")
        manifest = corrupt_dataset(dataset, tmp_path / "o", ["fog"], [1], 1)
        assert [s.relative_path for s in manifest.skipped] == ["broken.jpg"]
        assert len(manifest.entries) == 2

    def test_grayscale_and_jpeg_inputs(self, tmp_path):
        from PIL import Image as PILImage

        root = tmp_path / "in"
        root.mkdir()
        gray = np.arange(0, 240, 10, dtype=np.uint8).reshape(6, 4)
        (root / "g.png").write_bytes(pngio.write_png(gray))
        PILImage.fromarray(np.full((8, 8, 3), 77, np.uint8)).save(root / "c.jpg", quality=90)
        manifest = corrupt_dataset(root, tmp_path / "o", ["contrast"], [1], 0)
        assert len(manifest.entries) == 2
        out = pngio.read_png((tmp_path / "o" / "contrast/1/g.png").read_bytes())
        assert out.shape == (6, 4, 3)

    def test_empty_input_rejected(self, tmp_path):
        empty = tmp_path / "none"
        empty.mkdir()
        with pytest.raises(EmptyInputError):
            corrupt_dataset(empty, tmp_path / "o", ["fog"], [1], 0)

    def test_manifest_schema_roundtrip(self, dataset, tmp_path):
        corrupt_dataset(dataset, tmp_path / "o", ["fog"], [1], 7, dataset_name="mini")
        text = (tmp_path / "o" / "manifest.json").read_text()
        data = json.loads(text)
        assert data["dataset_name"] == "mini"
        assert data["master_seed"] == "7"
        back = Manifest.from_json(text)
        assert back.to_json() == text
        for entry in data["entries"]:
            assert set(entry) == {
                "relative_path",
                "kind",
                "level",
                "derived_seed",
                "output_path",
                "content_digest",
            }
            assert int(entry["derived_seed"]) == derive_seed(7, entry["relative_path"], "fog", 1)
