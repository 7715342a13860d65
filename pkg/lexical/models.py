from dataclasses import dataclass, field

from core.exceptions import DatasetError
from websites.models import DatasetDescriptor, ValueDomain

# extracted rows come from fixed string rules, not from the curated datasets
HEURISTIC_PROVENANCE = "heuristic"


@dataclass(frozen=True)
class ParsedUrl:
    raw: str
    scheme: str
    host: str
    registered_domain: str
    subdomain_labels: tuple
    path: str = ""
    query: str = ""
    fragment: str = ""
    is_ip_host: bool = False
    userinfo: str = ""
    port: int = None

    @property
    def netloc(self):
        host = "[%s]" % self.host if ":" in self.host else self.host
        if self.userinfo:
            host = "%s@%s" % (self.userinfo, host)
        if self.port is not None:
            host = "%s:%d" % (host, self.port)
        return host

    def geturl(self):
        """The normalized URL rebuilt from the components."""
        url = "%s://%s%s" % (self.scheme, self.netloc, self.path)
        if self.query:
            url += "?" + self.query
        if self.fragment:
            url += "#" + self.fragment
        return url


@dataclass(frozen=True)
class LexicalFeatureRow:
    """One schema-shaped row; features that need page content or lookups hold 0."""

    url: str
    descriptor: DatasetDescriptor
    values: dict
    unsupported: tuple = ()
    provenance: str = field(default=HEURISTIC_PROVENANCE)

    def __post_init__(self):
        if tuple(self.values) != self.descriptor.feature_names:
            raise DatasetError(
                "%s: extracted row does not follow the schema's feature order" % self.descriptor.id
            )
        for (name, value), domain in zip(self.values.items(), self.descriptor.value_domains):
            levels = ValueDomain(domain).levels
            if levels is not None and value not in levels:
                raise DatasetError("%s=%r is outside the %s domain" % (name, value, domain))
            if levels is None and (value < 0 or int(value) != value):
                raise DatasetError("%s=%r is not a non-negative count" % (name, value))

    def as_list(self):
        return list(self.values.values())

    @property
    def supported(self):
        return tuple(name for name in self.values if name not in self.unsupported)
