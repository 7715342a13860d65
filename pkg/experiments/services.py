import io
import logging
import time
from collections import defaultdict
from pathlib import Path

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from classifiers.models import Algorithm, Standardizer
from classifiers.serializers import build_params
from classifiers.services import fit, predict
from core.exceptions import ConfigurationError, ReductionError
from core.utils.notices import NoticeLog
from core.utils.utils import deriveSeeds, formatPercent
from experiments.models import (
    ClassifierSummary,
    EvaluationReport,
    ExperimentConfig,
    FeatureRankingReport,
    FoldAudit,
    FoldResult,
    PcaSettings,
    Protocol,
    Stage,
)
from reduction.services import (
    feature_importance,
    fit_pca,
    pc_scatter_export,
    ranking_frame,
    select_components,
    transform,
    write_scatter_csv,
)
from scoring.models import METRIC_LABELS
from scoring.services import confusion, mean_and_std, score
from websites.descriptors import DESCRIPTORS
from websites.models import Partition, SplitKind
from websites.services import (
    holdout,
    load_dataset,
    matrix_checksum,
    stratified_kfold,
    three_way,
)

logger = logging.getLogger(__name__)

HOLDOUT_TRAIN_FRACTION = 0.7
THREE_WAY_FRACTIONS = (0.6, 0.2, 0.2)
DATASET_EXTENSIONS = (".csv", ".arff")


# ---------------------------------------------------------------- folds


def build_plan(matrix, config, notices):
    protocol = Protocol(config.protocol)
    if protocol == Protocol.CV10:
        return stratified_kfold(matrix, config.folds, config.seed, notices)
    if protocol == Protocol.HOLDOUT70:
        return holdout(matrix, HOLDOUT_TRAIN_FRACTION, config.seed)
    return three_way(matrix, THREE_WAY_FRACTIONS, config.seed)


def fold_indices(plan):
    """``(fold, train, test, validation)`` index sets of a split plan."""
    if plan.kind == SplitKind.KFOLD:
        return [
            (fold, plan.indices(fold, exclude=True), plan.indices(fold), None)
            for fold in range(plan.k)
        ]
    validation = None
    if plan.kind == SplitKind.THREE_WAY:
        validation = plan.indices(Partition.VALIDATION)
    return [(0, plan.indices(Partition.TRAIN), plan.indices(Partition.TEST), validation)]


def reduce_fold(pca, train, others, notices):
    """Fit PCA on the training rows only and project every partition with it."""
    model = fit_pca(train, standardize=pca.standardize, notices=notices)
    k = select_components(model, pca.variance_threshold)
    projected = [None if m is None else transform(model, m, k) for m in others]
    return model, k, transform(model, train, k), projected


def _task_seed(seeds, fold, algorithm):
    return seeds[fold * len(Algorithm) + list(Algorithm).index(algorithm)]


def run_fold(matrix, config, fold, trainIndices, testIndices, validationIndices, seeds):
    """Train and score every configured classifier on one fold.

    Returns the fold's results, its audit record, per-stage seconds and notices.
    """
    notices = NoticeLog()
    timings = defaultdict(float)
    train = matrix.take(trainIndices)
    test = matrix.take(testIndices)
    validation = None if validationIndices is None else matrix.take(validationIndices)

    audit = FoldAudit(
        fold=fold,
        train_indices=trainIndices,
        test_indices=testIndices,
        validation_indices=validationIndices,
    )
    k = None
    if config.pca.enabled:
        started = time.perf_counter()
        model, k, train, (test, validation) = reduce_fold(
            config.pca, train, (test, validation), notices
        )
        timings[Stage.REDUCE] += time.perf_counter() - started
        audit = FoldAudit(
            fold=fold,
            train_indices=trainIndices,
            test_indices=testIndices,
            validation_indices=validationIndices,
            pca_mean=model.mean,
            pca_scale=model.scale,
            n_components=k,
        )

    classList = matrix.descriptor.classes
    results = []
    for algorithm in config.classifiers:
        params = build_params(
            algorithm,
            config.overrides.get(algorithm.value),
            seed=_task_seed(seeds, fold, algorithm),
        )
        started = time.perf_counter()
        trained = fit(
            algorithm,
            train,
            params,
            notices,
            validation=validation if algorithm == Algorithm.ANN else None,
        )
        fitted = time.perf_counter()
        prediction = predict(trained, test)
        predicted = time.perf_counter()
        timings[Stage.FIT] += fitted - started
        timings[Stage.PREDICT] += predicted - fitted

        cm = confusion(test.labels, prediction.labels, classList)
        results.append(
            FoldResult(
                algorithm=algorithm,
                fold=fold,
                confusion=cm,
                metrics=score(cm, averaging=config.averaging, notices=notices),
                fit_seconds=fitted - started,
                predict_seconds=predicted - fitted,
                n_components=k,
                flags=trained.flags,
                standardizer=trained.standardizer,
            )
        )
    for notice in notices:
        notice.context.setdefault("fold", fold)
    return results, audit, dict(timings), list(notices)


def summarize(results, algorithm, averaging, notices):
    own = [result for result in results if result.algorithm == algorithm]
    pooled = own[0].confusion
    for result in own[1:]:
        pooled = pooled + result.confusion
    return ClassifierSummary(
        algorithm=algorithm,
        confusion=pooled,
        metrics=score(pooled, averaging=averaging, notices=notices),
        fold_metrics=mean_and_std([result.metrics for result in own]),
        fit_seconds=sum(result.fit_seconds for result in own),
        predict_seconds=sum(result.predict_seconds for result in own),
    )


def run_experiment(config, data, notices=None):
    """Evaluate the configured classifiers on ``data`` under one protocol.

    Folds run through joblib when ``config.workers`` exceeds one; results are
    merged in fold order so the report does not depend on completion order.
    """
    notices = notices if notices is not None else NoticeLog()
    if config.dataset != data.descriptor.id:
        raise ConfigurationError(
            "configuration names dataset %s but the matrix follows %s"
            % (config.dataset, data.descriptor.id)
        )
    timings = defaultdict(float)
    started = time.perf_counter()
    plan = build_plan(data, config, notices)
    folds = fold_indices(plan)
    timings[Stage.SPLIT] += time.perf_counter() - started

    seeds = deriveSeeds(config.seed, len(folds) * len(Algorithm))
    outcomes = Parallel(n_jobs=config.workers)(
        delayed(run_fold)(data, config, fold, train, test, validation, seeds)
        for fold, train, test, validation in folds
    )

    results, audits = [], []
    for foldResults, audit, foldTimings, foldNotices in outcomes:
        results.extend(foldResults)
        audits.append(audit)
        notices.extend(foldNotices)
        for stage, seconds in foldTimings.items():
            timings[stage] += seconds

    summaries = tuple(
        summarize(results, algorithm, config.averaging, notices)
        for algorithm in config.classifiers
    )
    logger.info(
        "%s (%s, %s): %s",
        data.descriptor.id,
        config.protocol,
        config.variant,
        ", ".join(
            "%s %s" % (s.algorithm.label, formatPercent(s.metrics.accuracy)) for s in summaries
        ),
    )
    return EvaluationReport(
        config=config,
        dataset_name=data.descriptor.name,
        checksum=matrix_checksum(data),
        n_rows=data.n_rows,
        class_list=data.descriptor.classes,
        folds=tuple(results),
        summaries=summaries,
        audits=tuple(audits),
        timings={str(stage): seconds for stage, seconds in timings.items()},
        notices=tuple(notices),
    )


def _disjoint(*indexSets):
    present = [np.asarray(indices) for indices in indexSets if indices is not None]
    for i, first in enumerate(present):
        for second in present[i + 1 :]:
            if np.intersect1d(first, second).size:
                return False
    return True


def verify_no_leakage(report, data):
    """Check that every fold's preprocessing saw its training rows and nothing else.

    The partitions of each fold must be disjoint. PCA statistics and the
    component count are refitted from the logged training indices, and so is
    each classifier's standardization, on the projected rows when PCA is on.
    """
    config = report.config
    for audit in report.audits:
        if not _disjoint(audit.train_indices, audit.test_indices, audit.validation_indices):
            logger.warning("fold %d: partitions share rows", audit.fold)
            return False
        train = data.take(audit.train_indices)
        if config.pca.enabled:
            model = fit_pca(train, standardize=config.pca.standardize)
            k = select_components(model, config.pca.variance_threshold)
            if not (
                audit.n_components == k
                and np.array_equal(model.mean, audit.pca_mean)
                and np.array_equal(model.scale, audit.pca_scale)
            ):
                logger.warning("fold %d: PCA statistics do not match the training rows", audit.fold)
                return False
            train = transform(model, train, k)
        elif audit.n_components is not None:
            return False
        expected = Standardizer.fit(train.values)
        for result in report.folds:
            if result.fold != audit.fold or result.standardizer is None:
                continue
            if not (
                np.array_equal(expected.mean, result.standardizer.mean)
                and np.array_equal(expected.scale, result.standardizer.scale)
            ):
                logger.warning(
                    "fold %d: %s standardization does not match the training rows",
                    audit.fold,
                    Algorithm(result.algorithm).label,
                )
                return False
    return True


# ---------------------------------------------------------------- rendering


def table_frame(report):
    rows = []
    for summary in report.summaries:
        row = {"Classifier": Algorithm(summary.algorithm).label}
        for name, label in METRIC_LABELS.items():
            row[label] = round(getattr(summary.metrics, name) * 100.0, 2)
        rows.append(row)
    return pd.DataFrame(rows, columns=["Classifier", *METRIC_LABELS.values()])


def render_table(report, format="markdown"):
    """Metrics table with one row per classifier, percentages to two decimals."""
    if not report.summaries:
        raise ConfigurationError("nothing to render: the report has no classifiers")
    if format == "csv":
        buffer = io.StringIO()
        table_frame(report).to_csv(buffer, index=False, float_format="%.2f")
        return buffer.getvalue()
    if format != "markdown":
        raise ConfigurationError("unknown table format %r" % format)
    header = ["Classifier", *METRIC_LABELS.values()]
    lines = [
        "| %s |" % " | ".join(header),
        "|%s|" % "|".join(["---"] * len(header)),
    ]
    for summary in report.summaries:
        cells = [Algorithm(summary.algorithm).label]
        cells.extend(formatPercent(getattr(summary.metrics, name)) for name in METRIC_LABELS)
        lines.append("| %s |" % " | ".join(cells))
    return "\n".join(lines) + "\n"



def write_report(report, out_dir):
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for extension, format in ((".md", "markdown"), (".csv", "csv")):
        path = out_dir / (report.basename + extension)
        path.write_text(render_table(report, format))
        paths.append(path)
    return paths


# ---------------------------------------------------------------- full suite


def locate_dataset(data_dir, dataset_id):
    for extension in DATASET_EXTENSIONS:
        path = Path(data_dir) / (dataset_id + extension)
        if path.is_file():
            return path
    return None


def rank_features(data, variance_threshold, top_n, standardize=True, notices=None, weighted=False):
    model = fit_pca(data, standardize=standardize, notices=notices)
    k = select_components(model, variance_threshold)
    ranking = feature_importance(model, k, weighted=weighted)
    return model, FeatureRankingReport(
        dataset=data.descriptor.id,
        ranking=ranking,
        top_n=top_n,
        n_components=k,
        variance_covered=float(model.cumulative_variance()[k - 1]),
    )


def write_rankings(rankings, path):
    frames = []
    for report in rankings:
        frame = ranking_frame(report.ranking)
        frame.insert(0, "dataset", report.dataset)
        frames.append(frame)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    pd.concat(frames, ignore_index=True).to_csv(path, index=False, float_format="%.10g")
    return path


def run_full_suite(
    data_dir,
    out_dir,
    seed,
    classifiers=tuple(Algorithm),
    workers=1,
    variance_threshold=0.95,
    top_n=10,
    notices=None,
):
    """Full-feature and PCA experiments over every dataset found in ``data_dir``.

    Writes one metrics table pair per dataset and variant, the combined
    feature ranking and a first-two-components scatter export per dataset.
    A missing dataset file is skipped with a ``dataset_missing`` notice.
    Returns ``(reports, rankings, datasets, artifacts)``, the last being the
    files written by this run.
    """
    notices = notices if notices is not None else NoticeLog()
    out_dir = Path(out_dir)
    reports, rankings, datasets, artifacts = [], [], [], []
    for dataset_id, descriptor in DESCRIPTORS.items():
        path = locate_dataset(data_dir, dataset_id)
        if path is None:
            notices.record(
                "dataset_missing",
                "no %s file for %s in %s; skipping it" % ("/".join(DATASET_EXTENSIONS), dataset_id, data_dir),
                dataset=dataset_id,
            )
            continue
        data = load_dataset(path, descriptor, notices)
        datasets.append((path, data))
        for pcaEnabled in (False, True):
            config = ExperimentConfig(
                dataset=dataset_id,
                classifiers=classifiers,
                pca=PcaSettings(enabled=pcaEnabled, variance_threshold=variance_threshold),
                seed=seed,
                workers=workers,
            )
            report = run_experiment(config, data, notices)
            artifacts.extend(write_report(report, out_dir))
            reports.append(report)
        model, ranking = rank_features(data, variance_threshold, top_n, notices=notices)
        rankings.append(ranking)
        try:
            artifacts.append(
                write_scatter_csv(
                    pc_scatter_export(model, data), out_dir / ("pc_scatter_%s.csv" % dataset_id)
                )
            )
        except ReductionError as exc:
            logger.warning("no scatter export for %s: %s", dataset_id, exc)
    if rankings:
        artifacts.append(write_rankings(rankings, out_dir / "feature_ranking.csv"))
    return reports, rankings, datasets, artifacts
