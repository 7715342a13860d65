import logging
import sys

from django.core.management.base import BaseCommand, CommandError

from core import MODEL_FORMAT_VERSION, REPORT_FORMAT_VERSION, __version__
from core.exceptions import BenchmarkError, ConfigurationError, InvalidHyperparams

logger = logging.getLogger(__name__)

USAGE_ERROR = 1
DATA_ERROR = 2
INTERNAL_ERROR = 3


def one_line(message):
    return " ".join(str(message).splitlines())


class BenchmarkCommand(BaseCommand):
    """Base for the toolkit commands: shared version string and exit codes.

    0 success, 1 usage error, 2 data error, 3 internal error.
    """

    requires_system_checks = []

    def get_version(self):
        return "phishbench %s (model format %s, report format %s)" % (
            __version__,
            MODEL_FORMAT_VERSION,
            REPORT_FORMAT_VERSION,
        )

    def create_parser(self, prog_name, subcommand, **kwargs):
        parser = super().create_parser(prog_name, subcommand, **kwargs)
        # argument errors raise CommandError (returncode 1) instead of exiting with 2
        parser.called_from_command_line = False
        return parser

    def run_from_argv(self, argv):
        try:
            super().run_from_argv(argv)
        except CommandError as exc:
            # only parser errors escape run_from_argv
            self.stderr.write("UsageError: %s" % one_line(exc))
            sys.exit(exc.returncode)

    def execute(self, *args, **options):
        try:
            return super().execute(*args, **options)
        except CommandError as exc:
            raise CommandError(one_line(exc), returncode=exc.returncode)
        except (ConfigurationError, InvalidHyperparams) as exc:
            raise CommandError(one_line(exc), returncode=USAGE_ERROR)
        except (BenchmarkError, OSError) as exc:
            raise CommandError(one_line(exc), returncode=DATA_ERROR)
        except Exception as exc:
            logger.exception("internal error in %s", self.__class__.__module__)
            raise CommandError(
                "internal error: %s" % one_line(exc), returncode=INTERNAL_ERROR
            )

    def usage_error(self, message):
        return CommandError(message, returncode=USAGE_ERROR)
