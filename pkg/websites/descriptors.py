from core.exceptions import DatasetError
from websites.models import ClassLabel, DatasetDescriptor, ValueDomain

C = ValueDomain.CONTINUOUS
T = ValueDomain.TERNARY
B = ValueDomain.BINARY

# Mendeley "Phishing Dataset for Machine Learning: Feature Evaluation" (2018)
DATASET1_FEATURES = (
    ("NumDots", C),
    ("SubdomainLevel", C),
    ("PathLevel", C),
    ("UrlLength", C),
    ("NumDash", C),
    ("NumDashInHostname", C),
    ("AtSymbol", B),
    ("TildeSymbol", B),
    ("NumUnderscore", C),
    ("NumPercent", C),
    ("NumQueryComponents", C),
    ("NumAmpersand", C),
    ("NumHash", C),
    ("NumNumericChars", C),
    ("NoHttps", B),
    ("RandomString", B),
    ("IpAddress", B),
    ("DomainInSubdomains", B),
    ("DomainInPaths", B),
    ("HttpsInHostname", B),
    ("HostnameLength", C),
    ("PathLength", C),
    ("QueryLength", C),
    ("DoubleSlashInPath", B),
    ("NumSensitiveWords", C),
    ("EmbeddedBrandName", B),
    ("PctExtHyperlinks", C),
    ("PctExtResourceUrls", C),
    ("ExtFavicon", B),
    ("InsecureForms", B),
    ("RelativeFormAction", B),
    ("ExtFormAction", B),
    ("AbnormalFormAction", B),
    ("PctNullSelfRedirectHyperlinks", C),
    ("FrequentDomainNameMismatch", B),
    ("FakeLinkInStatusBar", B),
    ("RightClickDisabled", B),
    ("PopUpWindow", B),
    ("SubmitInfoToEmail", B),
    ("IframeOrFrame", B),
    ("MissingTitle", B),
    ("ImagesOnlyInForm", B),
    ("SubdomainLevelRT", T),
    ("UrlLengthRT", T),
    ("PctExtResourceUrlsRT", T),
    ("AbnormalExtFormActionR", T),
    ("ExtMetaScriptLinkRT", T),
    ("PctExtNullSelfRedirectHyperlinksRT", T),
)

# UCI "Phishing Websites" (Mohammad, McCluskey, Thabtah)
DATASET2_FEATURES = (
    "having_IP_Address",
    "URL_Length",
    "Shortining_Service",
    "having_At_Symbol",
    "double_slash_redirecting",
    "Prefix_Suffix",
    "having_Sub_Domain",
    "SSLfinal_State",
    "Domain_registeration_length",
    "Favicon",
    "port",
    "HTTPS_token",
    "Request_URL",
    "URL_of_Anchor",
    "Links_in_tags",
    "SFH",
    "Submitting_to_email",
    "Abnormal_URL",
    "Redirect",
    "on_mouseover",
    "RightClick",
    "popUpWidnow",
    "Iframe",
    "age_of_domain",
    "DNSRecord",
    "web_traffic",
    "Page_Rank",
    "Google_Index",
    "Links_pointing_to_page",
    "Statistical_report",
)

# UCI "Website Phishing" (Abdelhamid)
DATASET3_FEATURES = (
    "SFH",
    "popUpWidnow",
    "SSLfinal_State",
    "Request_URL",
    "URL_of_Anchor",
    "web_traffic",
    "URL_Length",
    "age_of_domain",
    "having_IP_Address",
)

DATASET1 = DatasetDescriptor(
    id="d1",
    name="Dataset 1",
    feature_names=tuple(name for name, _ in DATASET1_FEATURES),
    value_domains=tuple(domain for _, domain in DATASET1_FEATURES),
    label_mapping={0: ClassLabel.LEGITIMATE, 1: ClassLabel.PHISHING},
    label_column="CLASS_LABEL",
    expected_rows=10000,
    reference_counts={ClassLabel.PHISHING: 5000, ClassLabel.LEGITIMATE: 5000},
    ignored_columns=("id",),
    provenance="Mendeley Data, Phishing Dataset for Machine Learning (h3cgnj8hft)",
)

DATASET2 = DatasetDescriptor(
    id="d2",
    name="Dataset 2",
    feature_names=DATASET2_FEATURES,
    value_domains=(T,) * len(DATASET2_FEATURES),
    label_mapping={-1: ClassLabel.PHISHING, 1: ClassLabel.LEGITIMATE},
    label_column="Result",
    expected_rows=11055,
    reference_counts={ClassLabel.PHISHING: 4898, ClassLabel.LEGITIMATE: 6157},
    ignored_columns=("index", "id"),
    provenance="UCI Machine Learning Repository, Phishing Websites",
)

DATASET3 = DatasetDescriptor(
    id="d3",
    name="Dataset 3",
    feature_names=DATASET3_FEATURES,
    value_domains=(T,) * len(DATASET3_FEATURES),
    label_mapping={
        -1: ClassLabel.PHISHING,
        0: ClassLabel.SUSPICIOUS,
        1: ClassLabel.LEGITIMATE,
    },
    label_column="Result",
    expected_rows=1353,
    reference_counts={
        ClassLabel.PHISHING: 702,
        ClassLabel.SUSPICIOUS: 103,
        ClassLabel.LEGITIMATE: 548,
    },
    provenance="UCI Machine Learning Repository, Website Phishing",
)

DESCRIPTORS = {
    DATASET1.id: DATASET1,
    DATASET2.id: DATASET2,
    DATASET3.id: DATASET3,
}


def get_descriptor(dataset_id):
    try:
        return DESCRIPTORS[str(dataset_id).lower()]
    except KeyError:
        raise DatasetError(
            "unknown dataset %r (expected one of %s)"
            % (dataset_id, ", ".join(DESCRIPTORS))
        )
