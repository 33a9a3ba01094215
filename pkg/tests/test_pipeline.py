import json

import numpy as np
import pytest

from orientrec import classify, pipeline, subspace
from orientrec.errors import DataError, NumericError
from orientrec.gradientfield import extract
from orientrec.pipeline import Recognizer, RecognizerConfig


def toy_samples(rng, n_classes=3, per_class=2, shape=(8, 6), spread=60.0):
    """Well-separated classes: one random pattern each plus small jitter."""
    protos = [rng.uniform(0, 255, size=shape) for _ in range(n_classes)]
    samples = []
    for cls, proto in enumerate(protos):
        for _ in range(per_class):
            img = np.clip(proto + rng.normal(0, spread / 20, size=shape), 0, 255)
            samples.append((img, f"c{cls}"))
    return samples


class TestFit:
    def test_shape_arithmetic(self, rng):
        samples = toy_samples(rng, n_classes=3, per_class=2)
        rec = pipeline.fit(samples, RecognizerConfig(features="second", classifier="crc", dim=4, image_shape=(8, 6)))
        assert rec.dictionary.matrix.shape == (8, 6)  # height 2d = 8, one column per image
        assert rec.config.dim == 4
        assert rec.classes == ["c0", "c1", "c2"]

    def test_single_image_single_class(self, rng):
        img = rng.uniform(0, 255, size=(8, 6))
        rec = pipeline.fit([(img, "only")], RecognizerConfig(dim=1, image_shape=(8, 6)))
        for _ in range(5):
            label, _ = pipeline.predict(rec, rng.uniform(0, 255, size=(8, 6)))
            assert label == "only"

    def test_default_dim_is_min_k_n(self, rng):
        samples = toy_samples(rng)
        rec = pipeline.fit(samples, RecognizerConfig(image_shape=(8, 6)))
        assert rec.config.dim == 6  # N = 6 < K = 48

    def test_d_out_of_range(self, rng):
        samples = toy_samples(rng)
        with pytest.raises(NumericError, match="d out of range"):
            pipeline.fit(samples, RecognizerConfig(dim=7, image_shape=(8, 6)))

    def test_empty_training_set(self):
        with pytest.raises(NumericError, match="at least one"):
            pipeline.fit([], RecognizerConfig(image_shape=(8, 6)))

    def test_bad_config_values(self, rng):
        samples = toy_samples(rng)
        with pytest.raises(NumericError):
            pipeline.fit(samples, RecognizerConfig(features="third", image_shape=(8, 6)))
        with pytest.raises(NumericError):
            pipeline.fit(samples, RecognizerConfig(classifier="svm", image_shape=(8, 6)))
        with pytest.raises(NumericError):
            pipeline.fit(samples, RecognizerConfig(lam=0.0, image_shape=(8, 6)))

    def test_raw_matches_real_pca_oracle(self, rng):
        samples = toy_samples(rng, n_classes=5, per_class=1, shape=(4, 3))
        rec = pipeline.fit(samples, RecognizerConfig(features="raw", classifier="nnc", dim=2, image_shape=(4, 3)))
        X = np.column_stack([img.ravel(order="F") for img, _ in samples])
        evals, evecs = np.linalg.eigh(X @ X.T)
        order = np.argsort(-evals)[:2]
        oracle_basis = evecs[:, order]
        oracle_embeddings = oracle_basis.T @ X
        got = subspace.project(rec.model, X.astype(complex))
        # align the free per-component phase before comparing
        for k in range(2):
            phase = np.vdot(got[k], oracle_embeddings[k])
            phase /= abs(phase)
            assert np.allclose(got[k] * np.conj(phase), oracle_embeddings[k], atol=1e-8)


class TestPredict:
    @pytest.mark.parametrize("classifier", ["crc", "nnc"])
    def test_training_images_recovered(self, rng, classifier):
        samples = toy_samples(rng)
        rec = pipeline.fit(samples, RecognizerConfig(classifier=classifier, dim=5, image_shape=(8, 6)))
        for img, label in samples:
            got, scores = pipeline.predict(rec, img)
            assert got == label
            assert scores.shape == (3,)

    def test_constant_images_collapse(self, rng):
        samples = toy_samples(rng)
        rec = pipeline.fit(samples, RecognizerConfig(dim=5, image_shape=(8, 6)))
        a = pipeline.predict(rec, np.full((8, 6), 40.0))
        b = pipeline.predict(rec, np.full((8, 6), 210.0))
        assert a[0] == b[0]
        assert np.array_equal(a[1], b[1])

    def test_wrong_size_is_resized(self, rng):
        samples = toy_samples(rng)
        rec = pipeline.fit(samples, RecognizerConfig(dim=5, image_shape=(8, 6)))
        label, _ = pipeline.predict(rec, rng.uniform(0, 255, size=(20, 17)))
        assert label in rec.classes


class TestInvariances:
    def test_phase_gauge_invariance(self, rng):
        samples = toy_samples(rng)
        queries = [rng.uniform(0, 255, size=(8, 6)) for _ in range(6)]
        rec = pipeline.fit(samples, RecognizerConfig(dim=5, image_shape=(8, 6)))

        phases = np.exp(1j * rng.uniform(0, 2 * np.pi, size=5))
        spun_model = subspace.SubspaceModel(
            basis=rec.model.basis * phases,
            spectrum=rec.model.spectrum,
            image_shape=rec.model.image_shape,
            feature_order=rec.model.feature_order,
            effective_rank=rec.model.effective_rank,
        )
        features = np.column_stack(
            [extract(np.asarray(img, float), "second") for img, _ in samples]
        )
        spun_dict = classify.stack_real_imag(
            subspace.project(spun_model, features), labels=[lbl for _, lbl in samples]
        )
        spun = Recognizer(
            config=rec.config,
            model=spun_model,
            dictionary=spun_dict,
            coder=classify.crc_fit(spun_dict, rec.config.lam),
        )
        for query in queries:
            base_label, base_scores = pipeline.predict(rec, query)
            spun_label, spun_scores = pipeline.predict(spun, query)
            assert spun_label == base_label
            assert np.allclose(spun_scores, base_scores, atol=1e-9)

    @pytest.mark.parametrize("features", ["first", "second"])
    def test_intensity_gauge_invariance(self, rng, features):
        # integer-valued images, power-of-two gain, integer shift: the
        # transformed gradients are exact scalings, so every feature is
        # bit-identical and so is every prediction
        samples = [(np.rint(img), lbl) for img, lbl in toy_samples(rng)]
        queries = [np.rint(rng.uniform(0, 255, size=(8, 6))) for _ in range(6)]
        config = RecognizerConfig(features=features, dim=5, image_shape=(8, 6))
        rec = pipeline.fit(samples, config)
        transformed = pipeline.fit([(0.5 * img + 30.0, lbl) for img, lbl in samples], config)
        for query in queries:
            base = pipeline.predict(rec, query)
            moved = pipeline.predict(transformed, 0.5 * query + 30.0)
            assert moved[0] == base[0]
            assert np.array_equal(moved[1], base[1])

    def test_training_permutation_invariance(self, rng):
        samples = toy_samples(rng)
        queries = [rng.uniform(0, 255, size=(8, 6)) for _ in range(6)]
        config = RecognizerConfig(dim=5, image_shape=(8, 6))
        rec = pipeline.fit(samples, config)
        perm = rng.permutation(len(samples))
        shuffled = pipeline.fit([samples[i] for i in perm], config)
        for query in queries:
            base_label, base_scores = pipeline.predict(rec, query)
            perm_label, perm_scores = pipeline.predict(shuffled, query)
            assert perm_label == base_label
            assert np.allclose(perm_scores, base_scores, atol=1e-9)


class TestSerialization:
    def test_round_trip_predictions_bit_identical(self, rng, tmp_path):
        samples = toy_samples(rng)
        rec = pipeline.fit(samples, RecognizerConfig(dim=5, image_shape=(8, 6)))
        path = tmp_path / "model.json"
        pipeline.save(rec, path)
        loaded = pipeline.load(path)
        for _ in range(20):
            query = rng.uniform(0, 255, size=(8, 6))
            base_label, base_scores = pipeline.predict(rec, query)
            got_label, got_scores = pipeline.predict(loaded, query)
            assert got_label == base_label
            assert np.array_equal(got_scores, base_scores)

    def test_round_trip_nnc(self, rng, tmp_path):
        samples = toy_samples(rng)
        rec = pipeline.fit(samples, RecognizerConfig(classifier="nnc", dim=4, image_shape=(8, 6)))
        path = tmp_path / "model.json"
        pipeline.save(rec, path)
        loaded = pipeline.load(path)
        assert loaded.coder is None
        query = rng.uniform(0, 255, size=(8, 6))
        assert pipeline.predict(loaded, query)[0] == pipeline.predict(rec, query)[0]

    def test_unknown_version(self, rng, tmp_path):
        samples = toy_samples(rng)
        rec = pipeline.fit(samples, RecognizerConfig(dim=3, image_shape=(8, 6)))
        path = tmp_path / "model.json"
        pipeline.save(rec, path)
        payload = json.loads(path.read_text())
        payload["version"] = 2
        path.write_text(json.dumps(payload))
        with pytest.raises(DataError, match="version"):
            pipeline.load(path)

    def test_truncated_file(self, rng, tmp_path):
        samples = toy_samples(rng)
        rec = pipeline.fit(samples, RecognizerConfig(dim=3, image_shape=(8, 6)))
        path = tmp_path / "model.json"
        pipeline.save(rec, path)
        path.write_text(path.read_text()[:-50])
        with pytest.raises(DataError, match="parse"):
            pipeline.load(path)

    def test_wrong_format(self, tmp_path):
        path = tmp_path / "model.json"
        path.write_text(json.dumps({"format": "something-else", "version": 1}))
        with pytest.raises(DataError, match="not a recognizer"):
            pipeline.load(path)
