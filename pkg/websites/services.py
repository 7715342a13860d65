import logging
import math
from pathlib import Path

import numpy as np
import pandas as pd
from scipy.io import arff

from core.exceptions import DatasetError, SplitError
from core.utils.notices import NoticeLog
from core.utils.utils import MASK64, arrayChecksum
from websites.descriptors import DESCRIPTORS
from websites.models import (
    CANONICAL_LABEL_COLUMN,
    ClassLabel,
    FeatureMatrix,
    SplitKind,
    SplitPlan,
    ValueDomain,
)

logger = logging.getLogger(__name__)


def _rng(seed):
    return np.random.default_rng(int(seed) & MASK64)


def _half_up(x):
    return int(math.floor(x + 0.5))


# ---------------------------------------------------------------- ingestion


def load_csv(path, descriptor, notices=None):
    path = Path(path)
    if not path.is_file():
        raise DatasetError("missing file: %s" % path)
    try:
        frame = pd.read_csv(
            path, dtype=str, keep_default_na=False, skipinitialspace=True
        )
    except pd.errors.EmptyDataError:
        raise DatasetError("%s: missing header row" % path)
    except (pd.errors.ParserError, UnicodeDecodeError) as exc:
        raise DatasetError("%s: %s" % (path, exc))
    return _frame_to_matrix(frame, descriptor, str(path), notices)


def load_arff(path, descriptor, notices=None):
    path = Path(path)
    if not path.is_file():
        raise DatasetError("missing file: %s" % path)
    try:
        data, meta = arff.loadarff(str(path))
    except (arff.ArffError, ValueError, NotImplementedError) as exc:
        raise DatasetError("%s: %s" % (path, exc))
    columns = {}
    for name in meta.names():
        column = data[name]
        if column.dtype.kind == "S":
            column = [value.decode("utf-8") for value in column]
        columns[name] = column
    frame = pd.DataFrame(columns, columns=meta.names())
    return _frame_to_matrix(frame, descriptor, str(path), notices)


def load_dataset(path, descriptor, notices=None):
    if Path(path).suffix.lower() == ".arff":
        return load_arff(path, descriptor, notices)
    return load_csv(path, descriptor, notices)


def detect_descriptor(path):
    path = Path(path)
    if not path.is_file():
        raise DatasetError("missing file: %s" % path)
    if path.suffix.lower() == ".arff":
        try:
            _, meta = arff.loadarff(str(path))
        except (arff.ArffError, ValueError, NotImplementedError) as exc:
            raise DatasetError("%s: %s" % (path, exc))
        columns = list(meta.names())
    else:
        try:
            columns = list(pd.read_csv(path, nrows=0).columns)
        except pd.errors.EmptyDataError:
            raise DatasetError("%s: missing header row" % path)
    for descriptor in DESCRIPTORS.values():
        kept = [c.strip() for c in columns if c.strip() not in descriptor.ignored_columns]
        if len(kept) == descriptor.feature_count + 1:
            return descriptor
    raise DatasetError(
        "%s: cannot infer the dataset schema from %d columns" % (path, len(columns))
    )


def _parse_numeric(series, source, column):
    try:
        # float() per cell keeps "%.17g" output bit-exact on the way back in
        parsed = series.to_numpy(dtype=object).astype(np.float64)
    except (TypeError, ValueError):
        parsed = pd.to_numeric(series, errors="coerce").to_numpy(dtype=np.float64)
    bad = ~np.isfinite(parsed)
    if bad.any():
        row = int(np.flatnonzero(bad)[0])
        raise DatasetError(
            "%s: unparseable numeric value %r at row %d, column '%s'"
            % (source, series.iloc[row], row + 1, column)
        )
    return parsed


def _frame_to_matrix(frame, descriptor, source, notices):
    notices = notices if notices is not None else NoticeLog()
    frame = frame.rename(columns=lambda name: str(name).strip())
    ignored = [name for name in frame.columns if name in descriptor.ignored_columns]
    frame = frame.drop(columns=ignored)
    if frame.shape[1] != descriptor.feature_count + 1:
        raise DatasetError(
            "%s: expected %d columns (%d features + label), found %d"
            % (source, descriptor.feature_count + 1, descriptor.feature_count, frame.shape[1])
        )
    labelColumn = frame.columns[-1]
    mapping = descriptor.mapping_for(labelColumn)
    if mapping is None:
        raise DatasetError(
            "%s: label column must be '%s' or '%s', found '%s'"
            % (source, CANONICAL_LABEL_COLUMN, descriptor.label_column, labelColumn)
        )
    if frame.shape[0] == 0:
        raise DatasetError("%s: empty dataset" % source)

    featureColumns = list(frame.columns[:-1])
    if featureColumns != list(descriptor.feature_names):
        notices.record(
            "feature_name_mismatch",
            "%s: header names differ from the %s schema; columns are read by position"
            % (source, descriptor.id),
        )
    values = np.empty((frame.shape[0], descriptor.feature_count), dtype=np.float64)
    for j, column in enumerate(featureColumns):
        values[:, j] = _parse_numeric(frame.iloc[:, j], source, column)

    rawLabels = _parse_numeric(frame.iloc[:, -1], source, labelColumn)
    labels = np.empty(rawLabels.size, dtype=np.int64)
    for raw in np.unique(rawLabels):
        mask = rawLabels == raw
        if raw != np.floor(raw) or int(raw) not in mapping:
            row = int(np.flatnonzero(mask)[0])
            raise DatasetError(
                "%s: unknown label value %r at row %d" % (source, raw, row + 1)
            )
        labels[mask] = int(mapping[int(raw)])
    matrix = FeatureMatrix(values, labels, descriptor)
    logger.info("loaded %s: %d rows x %d features", source, matrix.n_rows, matrix.n_cols)
    return matrix


def write_csv(m, path):
    path = Path(path)
    names = list(m.descriptor.feature_names)
    frame = pd.DataFrame(np.array(m.values), columns=names)
    for name, domain in zip(names, m.descriptor.value_domains):
        if domain != ValueDomain.CONTINUOUS:
            frame[name] = frame[name].astype(np.int64)
    frame[CANONICAL_LABEL_COLUMN] = np.array(m.labels)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format="%.17g")
    return path


def class_counts(m):
    values, counts = np.unique(m.labels, return_counts=True)
    return {ClassLabel(int(value)): int(count) for value, count in zip(values, counts)}


def matrix_checksum(m):
    return arrayChecksum(m.values, m.labels)


# ---------------------------------------------------------------- splitting


def stratified_kfold(m, k, seed, notices=None):
    """Shuffle each class with the seed and deal its rows round-robin into k folds.

    The dealing position carries over from one class to the next, so fold
    sizes differ by at most one as well as per-class counts.
    """
    notices = notices if notices is not None else NoticeLog()
    if k < 2:
        raise SplitError("k must be at least 2, got %d" % k)
    if k > m.n_rows:
        raise SplitError("k=%d exceeds the %d available rows" % (k, m.n_rows))
    rng = _rng(seed)
    assignments = np.empty(m.n_rows, dtype=np.int64)
    offset = 0
    for label, count in class_counts(m).items():
        if count < k:
            notices.record(
                "few_class_members",
                "class %s has %d rows, fewer than k=%d folds" % (label.label, count, k),
                label=int(label),
                count=count,
            )
        members = rng.permutation(np.flatnonzero(m.labels == int(label)))
        assignments[members] = (offset + np.arange(count)) % k
        offset = (offset + count) % k
    return SplitPlan(kind=SplitKind.KFOLD, seed=seed, assignments=assignments, k=k)


def _partition_totals(n, fractions):
    totals = [_half_up(fraction * n) for fraction in fractions[:-1]]
    totals.append(n - sum(totals))
    if totals[-1] < 0:
        raise SplitError("split fractions %r leave no rows for the last partition" % (fractions,))
    return totals


def _allocate(quotas, total, capacity):
    """Round ``quotas`` to integers summing to ``total`` by largest remainder.

    Counts stay within [0, capacity]; ties go to the earlier class.
    """
    counts = np.clip(np.floor(quotas).astype(np.int64), 0, capacity)
    while counts.sum() != total:
        remainders = quotas - counts
        if counts.sum() < total:
            open_ = np.flatnonzero(counts < capacity)
            order = open_[np.argsort(-remainders[open_], kind="stable")]
            step = 1
        else:
            open_ = np.flatnonzero(counts > 0)
            order = open_[np.argsort(remainders[open_], kind="stable")]
            step = -1
        gap = abs(int(total - counts.sum()))
        counts[order[:gap]] += step
    return counts


def _stratified_partition(m, kind, fractions, seed):
    """Deal each shuffled class into the partitions.

    Partition totals are fixed first (half-up rounding, the last one takes
    the rest), then every class gets its proportional share of each total,
    rounded by largest remainder against the cumulative quota.
    """
    rng = _rng(seed)
    classes = list(class_counts(m).items())
    sizes = np.array([count for _, count in classes], dtype=np.int64)
    totals = _partition_totals(m.n_rows, fractions)

    counts = np.zeros((len(classes), len(totals)), dtype=np.int64)
    dealt = np.zeros(len(classes), dtype=np.int64)
    cumulative = 0
    for part, total in enumerate(totals):
        cumulative += total
        quotas = sizes * cumulative / m.n_rows - dealt
        counts[:, part] = _allocate(quotas, total, sizes - dealt)
        dealt += counts[:, part]

    assignments = np.empty(m.n_rows, dtype=np.int64)
    for row, (label, _) in enumerate(classes):
        members = rng.permutation(np.flatnonzero(m.labels == int(label)))
        assignments[members] = np.repeat(np.arange(len(totals)), counts[row])
    return SplitPlan(kind=kind, seed=seed, assignments=assignments, fractions=tuple(fractions))


def holdout(m, train_frac, seed):
    if not 0 < train_frac < 1:
        raise SplitError("train fraction must lie in (0, 1), got %r" % train_frac)
    return _stratified_partition(m, SplitKind.HOLDOUT, (train_frac, 1.0 - train_frac), seed)


def three_way(m, fractions, seed):
    fractions = tuple(float(f) for f in fractions)
    if len(fractions) != 3 or not all(0 < f < 1 for f in fractions):
        raise SplitError("three-way split needs three fractions in (0, 1)")
    if abs(sum(fractions) - 1.0) > 1e-9:
        raise SplitError("split fractions must sum to 1, got %r" % sum(fractions))
    return _stratified_partition(m, SplitKind.THREE_WAY, fractions, seed)


def split(m, plan, part, exclude=False):
    if plan.n_rows != m.n_rows:
        raise SplitError(
            "plan covers %d rows but the matrix has %d" % (plan.n_rows, m.n_rows)
        )
    return m.take(plan.indices(part, exclude=exclude))


# ---------------------------------------------------------------- synthetic data


class SyntheticSampleCreation:
    """Seeded stand-in for the real datasets, shaped after their schemas."""

    SHIFT = 3.0
    TERNARY_CUT = 0.43

    def __init__(self, descriptor, seed, separation):
        self.descriptor = descriptor
        self.separation = separation
        self.rng = _rng(seed)
        self.labels = np.empty(0, dtype=np.int64)
        self.values = np.empty((0, descriptor.feature_count))

    def classProportions(self):
        classes = self.descriptor.classes
        counts = [self.descriptor.reference_counts.get(label, 1) for label in classes]
        total = float(sum(counts))
        return [(label, count / total) for label, count in zip(classes, counts)]

    def generateLabels(self, quantity):
        codes = []
        quotas = []
        cumulative = 0.0
        previous = 0
        for label, share in self.classProportions():
            cumulative += share
            upto = _half_up(cumulative * quantity)
            codes.append(int(label))
            quotas.append(upto - previous)
            previous = upto
        quotas[-1] += quantity - previous
        self.labels = self.rng.permutation(np.repeat(codes, quotas)).astype(np.int64)

    def generateFeatures(self):
        classes = np.array([int(label) for label in self.descriptor.classes])
        signs = self.rng.choice([-1.0, 1.0], size=(classes.size, self.descriptor.feature_count))
        latent = self.rng.standard_normal((self.labels.size, self.descriptor.feature_count))
        latent += self.SHIFT * self.separation * signs[np.searchsorted(classes, self.labels)]
        values = np.empty_like(latent)
        for j, domain in enumerate(self.descriptor.value_domains):
            column = latent[:, j]
            if domain == ValueDomain.TERNARY:
                values[:, j] = np.where(
                    column < -self.TERNARY_CUT, -1.0, np.where(column > self.TERNARY_CUT, 1.0, 0.0)
                )
            elif domain == ValueDomain.BINARY:
                values[:, j] = (column > 0).astype(np.float64)
            else:
                values[:, j] = column
        self.values = values

    def matrix(self):
        return FeatureMatrix(self.values, self.labels, self.descriptor)


def generate_synthetic(descriptor, n_rows, seed, separation):
    if n_rows < 2:
        raise DatasetError("synthetic data needs at least 2 rows, got %d" % n_rows)
    if not 0.0 <= separation <= 1.0:
        raise DatasetError("separation must lie in [0, 1], got %r" % separation)
    sampleData = SyntheticSampleCreation(descriptor, seed, separation)
    sampleData.generateLabels(n_rows)
    sampleData.generateFeatures()
    return sampleData.matrix()
