import logging
from dataclasses import dataclass, field

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Notice:
    code: str
    message: str
    context: dict = field(default_factory=dict)

    def as_dict(self):
        return {"code": self.code, "message": self.message, "context": dict(self.context)}


class NoticeLog:
    """Recoverable conditions collected during a run and echoed into reports."""

    def __init__(self, notices=None):
        self.notices = list(notices or [])

    def record(self, code, message, **context):
        notice = Notice(code=code, message=message, context=context)
        self.notices.append(notice)
        logger.warning("%s: %s", code, message)
        return notice

    def extend(self, notices):
        self.notices.extend(notices)

    def codes(self):
        return [notice.code for notice in self.notices]

    def as_list(self):
        return [notice.as_dict() for notice in self.notices]

    def __iter__(self):
        return iter(self.notices)

    def __len__(self):
        return len(self.notices)
