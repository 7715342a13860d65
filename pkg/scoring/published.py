"""Published benchmark results used as reference values.

Rows are ``(algorithm, accuracy, specificity, precision, recall, f1)`` in
percent, exactly as printed. Keys are ``(dataset, reduced)``.
"""
from scoring.models import PublishedRow

_TABLES = {
    ("d1", False): (
        ("dtree", 95.73, 95.48, 95.61, 95.98, 95.80),
        ("svm", 94.37, 93.59, 93.83, 95.13, 94.48),
        ("rf", 97.87, 98.45, 98.47, 97.30, 97.88),
        ("nb", 82.17, 96.49, 95.22, 68.20, 79.48),
        ("knn", 94.00, 95.68, 95.64, 92.36, 93.97),
        ("ann", 97.83, 97.91, 97.96, 97.76, 97.86),
    ),
    ("d2", False): (
        ("dtree", 95.30, 94.65, 95.71, 95.82, 95.77),
        ("svm", 92.58, 90.40, 92.22, 94.62, 93.40),
        ("rf", 95.96, 94.51, 95.67, 97.12, 96.39),
        ("nb", 60.48, 99.80, 99.44, 28.95, 44.85),
        ("knn", 93.10, 92.21, 93.76, 93.81, 93.78),
        ("ann", 95.90, 95.93, 96.71, 95.87, 96.29),
    ),
    ("d3", False): (
        ("dtree", 91.63, 93.72, 87.44, 87.44, 87.44),
        ("svm", 89.66, 92.24, 84.48, 84.48, 84.48),
        ("rf", 92.94, 94.70, 89.41, 89.41, 89.41),
        ("nb", 89.33, 92.00, 83.99, 83.99, 83.99),
        ("knn", 91.30, 93.47, 86.95, 86.95, 86.95),
        ("ann", 90.48, 92.86, 85.71, 85.71, 85.71),
    ),
    ("d1", True): (
        ("dtree", 91.83, 91.29, 91.58, 92.00, 91.97),
        ("svm", 93.97, 93.05, 93.33, 94.87, 94.09),
        ("rf", 94.90, 96.49, 96.46, 93.35, 94.88),
        ("nb", 78.37, 89.13, 86.49, 67.87, 76.06),
        ("knn", 93.97, 95.61, 95.57, 93.36, 93.94),
        ("ann", 97.13, 96.22, 96.48, 98.03, 97.19),
    ),
    ("d2", True): (
        ("dtree", 92.58, 91.12, 92.95, 93.75, 93.35),
        ("svm", 92.43, 89.57, 91.89, 94.73, 93.29),
        ("rf", 93.79, 92.82, 94.26, 94.57, 94.41),
        ("nb", 90.50, 85.43, 89.01, 94.57, 91.70),
        ("knn", 92.85, 91.80, 93.45, 93.70, 93.57),
        ("ann", 94.33, 95.46, 96.25, 93.43, 94.82),
    ),
    ("d3", True): (
        ("dtree", 90.31, 92.73, 85.47, 85.47, 85.47),
        ("svm", 89.16, 91.87, 83.74, 83.74, 83.74),
        ("rf", 90.15, 92.61, 85.22, 85.22, 85.22),
        ("nb", 89.00, 91.75, 83.50, 83.50, 83.50),
        ("knn", 92.12, 94.09, 88.18, 88.18, 88.18),
        ("ann", 91.13, 93.35, 86.70, 86.70, 86.70),
    ),
}

PUBLISHED_RESULTS = {
    key: tuple(PublishedRow(key[0], key[1], *row) for row in rows)
    for key, rows in _TABLES.items()
}

# smallest component count reaching 95% of the variance, standardized data
PUBLISHED_COMPONENT_COUNTS = {"d1": 30, "d2": 18}


def published_rows(dataset=None, reduced=None):
    for (datasetId, isReduced), rows in PUBLISHED_RESULTS.items():
        if dataset is not None and datasetId != dataset:
            continue
        if reduced is not None and isReduced != reduced:
            continue
        yield from rows


def published_row(dataset, reduced, algorithm):
    for row in PUBLISHED_RESULTS.get((dataset, reduced), ()):
        if row.algorithm == algorithm:
            return row
    return None
