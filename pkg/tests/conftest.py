from pathlib import Path

import pytest

from gucon_obligations.io import load_graph_file, load_policy_file
from gucon_obligations.kb import load_kb

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def signed_kb():
    return load_kb(load_graph_file(FIXTURES / "signed-kb.ttls"), kb_iri="https://example.org/data/kb-signed")


@pytest.fixture
def unsigned_kb():
    return load_kb(load_graph_file(FIXTURES / "unsigned-kb.ttls"), kb_iri="https://example.org/data/kb-unsigned")


@pytest.fixture
def sign_policy():
    return load_policy_file(FIXTURES / "sign-report-policy.gucon")


@pytest.fixture
def sign_ucp_policy():
    return load_policy_file(FIXTURES / "sign-report-policy.ttl")
