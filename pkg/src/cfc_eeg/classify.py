"""Gaussian discriminant classifiers (QDA and LDA) with covariance shrinkage."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

QDA = "QDA"
LDA = "LDA"


class SingularCovarianceError(np.linalg.LinAlgError):
    pass


@dataclass(frozen=True)
class GaussianClassModel:
    mode: str
    reg: float
    log_priors: np.ndarray  # (2,)
    means: np.ndarray  # (2, d)
    covariances: np.ndarray  # (2, d, d), regularized
    cholesky: np.ndarray  # lower factors of ``covariances``

    @property
    def n_features(self) -> int:
        return self.means.shape[1]

    @property
    def priors(self) -> np.ndarray:
        return np.exp(self.log_priors)

    def decision_scores(self, x) -> np.ndarray:
        """Log-discriminants, shape ``(n, 2)`` (or ``(2,)`` for one point)."""
        x = np.asarray(x, dtype=np.float64)
        single = x.ndim == 1
        x = np.atleast_2d(x)
        if x.shape[1] != self.n_features:
            raise ValueError(f"expected {self.n_features} features, got {x.shape[1]}")
        scores = np.empty((x.shape[0], 2))
        for c in range(2):
            L = self.cholesky[c]
            z = np.linalg.solve(L, (x - self.means[c]).T)
            half_logdet = np.sum(np.log(np.diag(L)))
            scores[:, c] = -half_logdet - 0.5 * np.sum(z * z, axis=0) + self.log_priors[c]
        return scores[0] if single else scores

    def predict(self, x) -> np.ndarray:
        """Class with the larger score; exact ties go to class 0."""
        s = self.decision_scores(x)
        return (s[..., 1] > s[..., 0]).astype(int)

    def predict_one(self, x):
        s = self.decision_scores(np.asarray(x, dtype=np.float64).reshape(-1))
        return int(s[1] > s[0]), s


def _shrink(cov: np.ndarray, reg: float) -> np.ndarray:
    d = cov.shape[0]
    return (1.0 - reg) * cov + reg * (np.trace(cov) / d) * np.eye(d)


def _factor(cov: np.ndarray, reg: float) -> np.ndarray:
    try:
        L = np.linalg.cholesky(cov)
    except np.linalg.LinAlgError:
        L = None
    if L is None or not np.all(np.isfinite(L)) or np.any(np.diag(L) <= 0):
        raise SingularCovarianceError(
            f"regularized covariance is singular (lambda={reg}); "
            "increase lambda or add jitter to the data")
    return L


def fit(train, labels, mode: str = QDA, reg: float = 1e-3,
        priors: str = "empirical") -> GaussianClassModel:
    """Estimate class means, shrunk covariances and priors.

    Each covariance is blended toward ``(trace/d) * I`` by ``reg``. In LDA mode
    the class covariances are pooled (weighted by ``n_c - 1``) before shrinkage.
    ``priors`` is ``"empirical"`` (training frequencies) or ``"equal"``.
    """
    x = np.asarray(train, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, None]
    labels = np.asarray(labels)
    mode = mode.upper()
    if mode not in (QDA, LDA):
        raise ValueError(f"unknown mode {mode!r}")
    if not 0.0 <= reg < 1.0:
        raise ValueError(f"lambda must be in [0, 1), got {reg}")
    if x.shape[1] < 1:
        raise ValueError("need at least one feature")
    groups = [x[labels == c] for c in (0, 1)]
    for c, g in enumerate(groups):
        if g.shape[0] < 2:
            raise ValueError(f"class {c} has {g.shape[0]} training rows, need at least 2")
    counts = np.array([g.shape[0] for g in groups], dtype=np.float64)
    if priors == "empirical":
        prior = counts / counts.sum()
    elif priors == "equal":
        prior = np.array([0.5, 0.5])
    else:
        raise ValueError(f"unknown priors {priors!r}")

    means = np.vstack([g.mean(axis=0) for g in groups])
    covs = [np.atleast_2d(np.cov(g, rowvar=False, ddof=1)) for g in groups]
    if mode == LDA:
        pooled = sum((n - 1) * s for n, s in zip(counts, covs)) / (counts.sum() - 2)
        covs = [pooled, pooled]
    covs = np.stack([_shrink(s, reg) for s in covs])
    chol = np.stack([_factor(s, reg) for s in covs])
    return GaussianClassModel(mode, float(reg), np.log(prior), means, covs, chol)


class GaussianClassifier:
    """fit/predict wrapper used by the cross-validation harness."""

    def __init__(self, mode: str = QDA, reg: float = 1e-3, priors: str = "empirical"):
        self.mode = mode
        self.reg = reg
        self.priors = priors
        self.model_ = None

    def fit(self, x, y):
        self.model_ = fit(x, y, self.mode, self.reg, self.priors)
        return self

    def predict(self, x):
        return self.model_.predict(x)


def _fmt(values) -> str:
    return " ".join(format(float(v), ".17g") for v in np.ravel(values))


def dumps(model: GaussianClassModel) -> str:
    """Plain-text serialization; floats carry 17 significant digits."""
    d = model.n_features
    lines = [f"dims {d}", f"mode {model.mode}", f"lambda {format(model.reg, '.17g')}"]
    for c in range(2):
        lines.append(f"class {c}")
        lines.append(f"prior {format(float(np.exp(model.log_priors[c])), '.17g')}")
        lines.append(f"logprior {format(float(model.log_priors[c]), '.17g')}")
        lines.append(f"mean {_fmt(model.means[c])}")
        lines.append(f"cov {_fmt(model.covariances[c])}")
    return "\n".join(lines) + "\n"


def loads(text: str) -> GaussianClassModel:
    fields = {}
    classes = []
    for line in text.splitlines():
        if not line.strip():
            continue
        key, _, rest = line.partition(" ")
        if key == "class":
            classes.append({})
        elif classes:
            classes[-1][key] = rest
        else:
            fields[key] = rest
    d = int(fields["dims"])
    mode = fields["mode"]
    reg = float(fields["lambda"])
    if len(classes) != 2:
        raise ValueError("model text must describe exactly two classes")
    log_priors = np.array([float(c["logprior"]) for c in classes])
    means = np.array([[float(v) for v in c["mean"].split()] for c in classes]).reshape(2, d)
    covs = np.array([[float(v) for v in c["cov"].split()] for c in classes]).reshape(2, d, d)
    chol = np.stack([_factor(s, reg) for s in covs])
    return GaussianClassModel(mode, reg, log_priors, means, covs, chol)
