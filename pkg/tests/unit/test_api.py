"""
Unit tests for the FastAPI routes.

Endpoint coroutines are awaited directly, so no server or HTTP client is
needed.
"""

import json
import sys
from fractions import Fraction
from pathlib import Path

import pytest
from fastapi import HTTPException

# Add src to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent.parent / "src"))

from api import routes_regularity
from api.main import health, root
from api.routes_regularity import analyze_endpoint, compare_endpoint, health_check, table_endpoint
from holder_regularity.schemas import ReportDocument


QUINTIC = {
    "coeffs": ["3/256", "0", "-25/256", "0", "150/256", "1", "150/256", "0", "-25/256", "0", "3/256"],
    "offset": -5,
}


class TestAnalyzeEndpoint:
    """POST /v1/regularity/analyze"""

    @pytest.mark.asyncio
    async def test_family(self):
        """A family spec returns the full report document."""
        document = await analyze_endpoint({"family": "primal:3,2"})
        assert document.report.gamma == pytest.approx(2.83007, abs=5e-6)
        assert document.report.optimal
        assert document.provenance.source == "family:primal:3,2"

    @pytest.mark.asyncio
    async def test_mask_matches_family(self):
        """The same symbol gives the same report and input hash."""
        by_mask = await analyze_endpoint({"mask": QUINTIC})
        by_family = await analyze_endpoint({"family": "primal:3,2"})
        assert by_mask.report == by_family.report
        assert by_mask.provenance.input_hash == by_family.provenance.input_hash

    @pytest.mark.asyncio
    async def test_serializes_rationals_as_strings(self):
        """The JSON body carries exact rationals."""
        document = await analyze_endpoint({"mask": QUINTIC})
        payload = json.loads(document.model_dump_json())
        assert payload["report"]["difference_mask"] == ["19/4", "-9/4", "3/8"]
        assert ReportDocument.model_validate(payload) == document

    @pytest.mark.asyncio
    async def test_holds_derived(self):
        """holds_derived lowers r."""
        document = await analyze_endpoint({"family": "primal:3,2", "holds_derived": 3})
        assert document.report.r == 3
        assert not document.report.optimal

    @pytest.mark.asyncio
    async def test_both_sources_rejected(self):
        """Exactly one of mask and family."""
        with pytest.raises(HTTPException) as excinfo:
            await analyze_endpoint({"mask": QUINTIC, "family": "primal:3,2"})
        assert excinfo.value.status_code == 422

    @pytest.mark.asyncio
    async def test_convergence_condition(self):
        """a(1) != 2 is a 422."""
        with pytest.raises(HTTPException) as excinfo:
            await analyze_endpoint({"mask": {"coeffs": ["1", "2", "1"], "offset": 0}})
        assert excinfo.value.status_code == 422
        assert "a(1) = 4" in excinfo.value.detail

    @pytest.mark.asyncio
    async def test_float_coefficients_rejected(self):
        """Coefficients must be exact."""
        with pytest.raises(HTTPException) as excinfo:
            await analyze_endpoint({"mask": {"coeffs": [0.5, 1, 0.5], "offset": -1}})
        assert excinfo.value.status_code == 422

    @pytest.mark.asyncio
    async def test_indefinite_is_conflict_with_diagnostics(self):
        """A sign-changing B is a 409 whose body carries the partial report."""
        response = await analyze_endpoint({"mask": {"coeffs": ["1/2", "1/2", "0", "1/2", "1/2"], "offset": -1}})
        assert response.status_code == 409
        body = json.loads(response.body)
        assert body["diagnostics"]["report"]["positivity"]["kind"] == "Indefinite"
        assert body["diagnostics"]["report"]["gamma"] is None


class TestTableEndpoint:
    """GET /v1/regularity/table/{kind}"""

    @pytest.mark.asyncio
    async def test_small_table(self):
        """Cells in (m, l) order with provenance."""
        document = await table_endpoint("primal", m_max=3)
        assert [(c.m, c.l) for c in document.cells] == [(2, 1), (3, 1), (3, 2)]
        assert document.cells[-1].gamma == pytest.approx(2.83007, abs=5e-6)
        assert document.provenance.source == "table:primal"

    @pytest.mark.asyncio
    async def test_decimals_follow_settings(self, monkeypatch):
        """The document records the configured table precision."""
        monkeypatch.setattr(
            routes_regularity, "settings", routes_regularity.settings.model_copy(update={"table_decimals": 3})
        )
        document = await table_endpoint("dual", m_max=2)
        assert document.decimals == 3


class TestCompareEndpoint:
    """POST /v1/regularity/compare"""

    @pytest.mark.asyncio
    async def test_compare(self):
        """The diagonal example."""
        document = await compare_endpoint({"spec_a": "primal:2,1", "spec_b": "primal:3,2"})
        assert document.result.theorem == "T5iii"
        assert document.result.c_star_exact == Fraction(10, 3)
        assert document.result.gap_bound == pytest.approx(0.26303, abs=5e-6)

    @pytest.mark.asyncio
    async def test_bad_spec(self):
        """Malformed specs are a 422."""
        with pytest.raises(HTTPException) as excinfo:
            await compare_endpoint({"spec_a": "primal:2", "spec_b": "primal:3,2"})
        assert excinfo.value.status_code == 422


class TestServiceEndpoints:
    """Root and health."""

    @pytest.mark.asyncio
    async def test_health(self):
        """Both health endpoints report healthy."""
        assert (await health())["status"] == "healthy"
        assert (await health_check())["service"] == "holder-regularity"

    @pytest.mark.asyncio
    async def test_root_lists_endpoints(self):
        """The index names every route."""
        index = await root()
        assert index["endpoints"]["analyze"] == "/v1/regularity/analyze"


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
