"""Словари GUCON, UCP, отчета о соответствии и предопределенные префиксы."""

from rdflib.namespace import DCAT, RDF, RDFS, XSD, Namespace

GUCON = Namespace("https://w3id.org/gucon#")
UCP = Namespace("https://w3id.org/gucon/ucp#")
GC = Namespace("https://w3id.org/gucon/compliance#")
HC = Namespace("https://w3id.org/gucon/hic#")
EXP = Namespace("https://example.org/gucon/exp/")
EX = Namespace("https://example.org/data/")

# Префиксы, объявленные по умолчанию для всех документов
DEFAULT_PREFIXES: dict[str, str] = {
    "rdf": str(RDF),
    "rdfs": str(RDFS),
    "xsd": str(XSD),
    "dcat": str(DCAT),
    "gucon": str(GUCON),
    "ucp": str(UCP),
    "gc": str(GC),
    "hc": str(HC),
    "exp": str(EXP),
    "ex": str(EX),
}

RDF_TYPE = str(RDF.type)

XSD_STRING = str(XSD.string)
XSD_INTEGER = str(XSD.integer)
XSD_DECIMAL = str(XSD.decimal)
XSD_DOUBLE = str(XSD.double)
XSD_BOOLEAN = str(XSD.boolean)
XSD_DATETIME = str(XSD.dateTime)
XSD_DURATION = str(XSD.duration)
XSD_DAYTIME_DURATION = str(XSD.dayTimeDuration)

NUMERIC_DATATYPES = frozenset({XSD_INTEGER, XSD_DECIMAL, XSD_DOUBLE})
DURATION_DATATYPES = frozenset({XSD_DURATION, XSD_DAYTIME_DURATION})

# Временные предикаты правил и базы знаний
START_TIME = str(GUCON.startTime)
DEADLINE = str(GUCON.deadline)
EXECUTION_TIME = str(GUCON.executionTime)

DCAT_CREATOR = str(DCAT) + "creator"
DCAT_DESCRIPTION = str(DCAT) + "description"
DCAT_MODIFIED = str(DCAT) + "modified"
