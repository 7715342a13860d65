import ipaddress
import logging
import re
from pathlib import Path
from urllib.parse import urlsplit

import pandas as pd

from core.exceptions import UrlParseError
from core.utils.notices import NoticeLog
from lexical.models import LexicalFeatureRow, ParsedUrl

logger = logging.getLogger(__name__)

SUPPORTED_SCHEMES = ("http", "https")
DEFAULT_PORTS = {"http": 80, "https": 443}

# registered domains under these take three labels instead of two
TWO_LEVEL_SUFFIXES = frozenset(
    (
        "co.uk", "org.uk", "ac.uk", "gov.uk", "me.uk",
        "com.au", "net.au", "org.au", "edu.au",
        "co.jp", "ne.jp", "or.jp",
        "co.nz", "co.za", "co.in", "co.kr", "co.id",
        "com.br", "com.cn", "com.mx", "com.tr", "com.my", "com.sg", "com.ar",
    )
)

COMMON_TLDS = frozenset(("com", "net", "org", "info", "biz", "edu", "gov", "co", "io"))

SENSITIVE_WORDS = ("secure", "account", "webscr", "login", "signin", "banking", "confirm")

SHORTENING_SERVICES = frozenset(
    (
        "bit.ly", "goo.gl", "shorte.st", "go2l.ink", "x.co", "ow.ly", "t.co", "tinyurl.com",
        "tr.im", "is.gd", "cli.gs", "yfrog.com", "migre.me", "ff.im", "tiny.cc", "url4.eu",
        "twit.ac", "su.pr", "twurl.nl", "snipurl.com", "short.to", "budurl.com", "ping.fm",
        "post.ly", "just.as", "bkite.com", "snipr.com", "fic.kr", "loopt.us", "doiop.com",
        "short.ie", "kl.am", "wp.me", "rubyurl.com", "om.ly", "to.ly", "bit.do", "lnkd.in",
        "db.tt", "qr.ae", "adf.ly", "bitly.com", "cur.lv", "ity.im", "q.gs", "po.st",
        "bc.vc", "twitthis.com", "u.to", "j.mp", "buzurl.com", "cutt.us", "u.bb",
        "yourls.org", "prettylinkpro.com", "scrnch.me", "filoops.info", "vzturl.com",
        "qr.net", "1url.com", "tweez.me", "v.gd", "link.zip.net",
    )
)

SCHEME_PREFIX = re.compile(r"^[a-z][a-z0-9+.-]*:(?!\d)", re.IGNORECASE)
HOST_LABELS = re.compile(r"[a-z0-9_-]+(\.[a-z0-9_-]+)*")
CONSONANT_RUN = re.compile(r"[bcdfghjklmnpqrstvwxz]{5,}")

# UCI-style ternary encoding
PHISHING = -1
SUSPICIOUS = 0
LEGITIMATE = 1


def _split_host(host):
    labels = host.split(".")
    size = 3 if len(labels) >= 3 and ".".join(labels[-2:]) in TWO_LEVEL_SUFFIXES else 2
    size = min(size, len(labels))
    return ".".join(labels[-size:]), tuple(labels[:-size])


def _ascii_host(host, raw):
    try:
        host = host.encode("idna").decode("ascii")
    except UnicodeError:
        raise UrlParseError("%r: host %r is not a valid domain name" % (raw, host))
    if not HOST_LABELS.fullmatch(host):
        raise UrlParseError("%r: host %r is not a valid domain name" % (raw, host))
    return host


def parse_url(raw, notices=None):
    """Split a URL into host, registered domain, subdomain labels and the rest.

    A URL without a scheme is read as ``http``. Only http and https are
    supported; other schemes are parsed anyway with an ``unsupported_scheme``
    notice. The registered domain is the last two host labels, or three
    under a known two-level suffix such as ``co.uk``.
    """
    notices = notices if notices is not None else NoticeLog()
    text = (raw or "").strip()
    if not text:
        raise UrlParseError("empty URL")
    candidate = text if "://" in text or SCHEME_PREFIX.match(text) else "http://" + text
    try:
        parts = urlsplit(candidate)
        port = parts.port
    except ValueError as exc:
        raise UrlParseError("%r: %s" % (text, exc))
    host = (parts.hostname or "").rstrip(".")
    if not host:
        raise UrlParseError("%r: no host" % text)

    scheme = parts.scheme.lower()
    if scheme not in SUPPORTED_SCHEMES:
        notices.record(
            "unsupported_scheme",
            "%r: scheme %s is not http or https; features may not apply" % (text, scheme),
            scheme=scheme,
        )

    try:
        ipaddress.ip_address(host)
        isIp = True
    except ValueError:
        isIp = False
    if isIp:
        registered, subdomains = host, ()
    else:
        host = _ascii_host(host, text)
        registered, subdomains = _split_host(host)

    userinfo = parts.netloc.rpartition("@")[0] if "@" in parts.netloc else ""
    return ParsedUrl(
        raw=text,
        scheme=scheme,
        host=host,
        registered_domain=registered,
        subdomain_labels=subdomains,
        path=parts.path,
        query=parts.query,
        fragment=parts.fragment,
        is_ip_host=isIp,
        userinfo=userinfo,
        port=port,
    )


# ------------------------------------------------------------------ feature rules


def _flag(condition):
    return 1 if condition else 0


def _ternary(phishing):
    return PHISHING if phishing else LEGITIMATE


def _subdomain_level(u):
    count = len(u.subdomain_labels)
    if count == 0:
        return LEGITIMATE
    if count == 1:
        return SUSPICIOUS
    return PHISHING


def _url_length(u):
    length = len(u.raw)
    if length < 54:
        return LEGITIMATE
    if length <= 75:
        return SUSPICIOUS
    return PHISHING


def _query_components(u):
    return len([part for part in u.query.split("&") if part])


def _random_string(u):
    if u.is_ip_host:
        return 0
    return _flag(any(CONSONANT_RUN.search(label) for label in u.host.split(".")))


def _sensitive_words(u):
    text = (u.host + u.path).lower()
    return sum(text.count(word) for word in SENSITIVE_WORDS)


def _shortened(u):
    return any(u.host == name or u.host.endswith("." + name) for name in SHORTENING_SERVICES)


def _domain_has_dash(u):
    if u.is_ip_host:
        return False
    return "-" in u.registered_domain.split(".")[0]


def _non_default_port(u):
    return u.port is not None and u.port != DEFAULT_PORTS.get(u.scheme)


FEATURE_RULES = {
    # Dataset 1
    "NumDots": lambda u: u.raw.count("."),
    "SubdomainLevel": lambda u: len(u.subdomain_labels),
    "PathLevel": lambda u: len([part for part in u.path.split("/") if part]),
    "UrlLength": lambda u: len(u.raw),
    "NumDash": lambda u: u.raw.count("-"),
    "NumDashInHostname": lambda u: u.host.count("-"),
    "AtSymbol": lambda u: _flag("@" in u.raw),
    "TildeSymbol": lambda u: _flag("~" in u.raw),
    "NumUnderscore": lambda u: u.raw.count("_"),
    "NumPercent": lambda u: u.raw.count("%"),
    "NumQueryComponents": _query_components,
    "NumAmpersand": lambda u: u.raw.count("&"),
    "NumHash": lambda u: u.raw.count("#"),
    "NumNumericChars": lambda u: sum(ch.isdigit() for ch in u.raw),
    "NoHttps": lambda u: _flag(u.scheme != "https"),
    "RandomString": _random_string,
    "IpAddress": lambda u: _flag(u.is_ip_host),
    "DomainInSubdomains": lambda u: _flag(any(label in COMMON_TLDS for label in u.subdomain_labels)),
    "DomainInPaths": lambda u: _flag(u.registered_domain in u.path.lower()),
    "HttpsInHostname": lambda u: _flag("https" in u.host),
    "HostnameLength": lambda u: len(u.host),
    "PathLength": lambda u: len(u.path),
    "QueryLength": lambda u: len(u.query),
    "DoubleSlashInPath": lambda u: _flag("//" in u.path),
    "NumSensitiveWords": _sensitive_words,
    "SubdomainLevelRT": _subdomain_level,
    "UrlLengthRT": _url_length,
    # Datasets 2 and 3
    "having_IP_Address": lambda u: _ternary(u.is_ip_host),
    "URL_Length": _url_length,
    "Shortining_Service": lambda u: _ternary(_shortened(u)),
    "having_At_Symbol": lambda u: _ternary("@" in u.raw),
    "double_slash_redirecting": lambda u: _ternary(u.raw.rfind("//") > 6),
    "Prefix_Suffix": lambda u: _ternary(_domain_has_dash(u)),
    "having_Sub_Domain": _subdomain_level,
    "port": lambda u: _ternary(_non_default_port(u)),
    "HTTPS_token": lambda u: _ternary("https" in u.host),
}


def supported_features(descriptor):
    return tuple(name for name in descriptor.feature_names if name in FEATURE_RULES)


def extract_features(u, target):
    """Row of ``target``'s features computed from the URL string alone.

    Features that depend on page content, DNS, WHOIS or traffic data are
    set to 0 and listed in the row's ``unsupported`` set.
    """
    values = {}
    unsupported = []
    for name in target.feature_names:
        rule = FEATURE_RULES.get(name)
        if rule is None:
            values[name] = 0
            unsupported.append(name)
        else:
            values[name] = int(rule(u))
    return LexicalFeatureRow(
        url=u.raw, descriptor=target, values=values, unsupported=tuple(unsupported)
    )


def extract_lines(lines, target, notices=None):
    """Rows for every parseable line; blank lines are skipped.

    Returns ``(rows, failures)`` where ``failures`` lists
    ``(line_number, text, message)`` for each malformed URL.
    """
    notices = notices if notices is not None else NoticeLog()
    rows, failures = [], []
    for number, line in enumerate(lines, start=1):
        text = line.strip()
        if not text:
            continue
        try:
            parsed = parse_url(text, notices)
        except UrlParseError as exc:
            notices.record("malformed_url", "line %d: %s" % (number, exc), line=number)
            failures.append((number, text, str(exc)))
            continue
        rows.append(extract_features(parsed, target))
    logger.info("extracted %d rows, %d malformed lines", len(rows), len(failures))
    return rows, failures


def extract_file(path, target, notices=None):
    with Path(path).open(encoding="utf-8") as handle:
        return extract_lines(handle, target, notices)


def rows_frame(rows, target):
    return pd.DataFrame(
        [row.as_list() for row in rows], columns=list(target.feature_names), dtype="int64"
    )


def write_rows(rows, target, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    rows_frame(rows, target).to_csv(path, index=False)
    return path
