__version__ = "1.0.0"

MODEL_FORMAT_VERSION = 1
REPORT_FORMAT_VERSION = 1
