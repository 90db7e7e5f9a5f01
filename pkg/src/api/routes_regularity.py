"""
FastAPI routes for the regularity service.

Provides HTTP endpoints over the same operations as the command line.
"""

import json
import logging
from typing import Optional

from fastapi import APIRouter, HTTPException, Query, status
from fastapi.responses import JSONResponse
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from holder_regularity.comparisons import compare_families
from holder_regularity.config import settings
from holder_regularity.exceptions import EnclosureTooWideError, InputError, MethodInapplicableError
from holder_regularity.families import parse_family_spec
from holder_regularity.regularity import analyze, regularity_table
from holder_regularity.schemas import (
    ComparisonDocument,
    FamilyKind,
    MaskFile,
    ReportDocument,
    TableDocument,
    make_provenance,
    report_document,
)


logger = logging.getLogger(__name__)

router = APIRouter(
    prefix="",
    tags=["regularity"],
)

TABLE_M_MAX_LIMIT = 12


class AnalyzeRequest(BaseModel):
    """Body of POST /analyze: exactly one of mask or family."""

    mask: Optional[MaskFile] = None
    family: Optional[str] = Field(default=None, description='Family spec, e.g. "primal:3,2"')
    holds_derived: Optional[int] = Field(default=None, ge=0)

    model_config = ConfigDict(extra="forbid")

    @model_validator(mode="after")
    def _one_source(self):
        if (self.mask is None) == (self.family is None):
            raise ValueError("give exactly one of 'mask' or 'family'")
        return self


class CompareRequest(BaseModel):
    spec_a: str
    spec_b: str

    model_config = ConfigDict(extra="forbid")


@router.post("/analyze", response_model=ReportDocument)
async def analyze_endpoint(payload: dict) -> ReportDocument:
    """
    Regularity report of one scheme.

    Request body:
        {"mask": {"coeffs": ["3/256", "0", ...], "offset": -5}}
        or {"family": "primal:3,2"}, optionally with "holds_derived": r

    Raises:
        422: malformed body or failed precondition (e.g. a(1) != 2)
        409: the method does not apply; the body carries the diagnostics
        500: the spectral radius could not be enclosed
    """
    try:
        request = AnalyzeRequest.model_validate(payload)
        if request.family is not None:
            symbol, source = parse_family_spec(request.family).symbol(), f"family:{request.family.strip()}"
        else:
            symbol, source = request.mask.to_laurent(), "mask"

        logger.info(f"Analyzing {source}")
        report = analyze(symbol, holds_derived=request.holds_derived)
        return report_document(symbol, report, source)

    except (ValidationError, InputError) as e:
        logger.warning(f"Validation error: {e}")
        raise HTTPException(status_code=status.HTTP_422_UNPROCESSABLE_ENTITY, detail=f"Invalid input: {e}")

    except MethodInapplicableError as e:
        logger.info(f"Method inapplicable for {source}: {e}")
        diagnostics = None
        if e.report is not None:
            diagnostics = json.loads(report_document(symbol, e.report, source).model_dump_json())
        return JSONResponse(
            status_code=status.HTTP_409_CONFLICT,
            content={"detail": str(e), "diagnostics": diagnostics},
        )

    except EnclosureTooWideError as e:
        logger.error(f"Enclosure failure: {e}")
        raise HTTPException(status_code=status.HTTP_500_INTERNAL_SERVER_ERROR, detail=str(e))

    except Exception as e:
        logger.error(f"Error analyzing scheme: {e}", exc_info=True)
        raise HTTPException(
            status_code=status.HTTP_500_INTERNAL_SERVER_ERROR,
            detail=f"Internal error during analysis: {str(e)}",
        )


@router.get("/table/{kind}", response_model=TableDocument)
async def table_endpoint(
    kind: FamilyKind, m_max: int = Query(default=8, ge=2, le=TABLE_M_MAX_LIMIT)
) -> TableDocument:
    """
    Regularity table gamma_{m,l}, 1 <= l < m <= m_max, ordered by (m, l).

    Raises:
        500: a cell could not be computed
    """
    try:
        cells = regularity_table(kind, m_max)
    except Exception as e:
        logger.error(f"Error computing {kind} table: {e}", exc_info=True)
        raise HTTPException(status_code=status.HTTP_500_INTERNAL_SERVER_ERROR, detail=str(e))

    payload = json.dumps({"kind": kind, "m_max": m_max, "bspline": False}, sort_keys=True)
    return TableDocument(
        kind=kind,
        m_max=m_max,
        decimals=settings.table_decimals,
        cells=cells,
        provenance=make_provenance(f"table:{kind}", payload),
    )


@router.post("/compare", response_model=ComparisonDocument)
async def compare_endpoint(payload: dict) -> ComparisonDocument:
    """
    Sharpest ratio constant between two family members and the implied gap bound.

    Request body:
        {"spec_a": "primal:2,1", "spec_b": "primal:3,2"}
    """
    try:
        request = CompareRequest.model_validate(payload)
        den, num = parse_family_spec(request.spec_a), parse_family_spec(request.spec_b)
        result = compare_families(den, num)
    except (ValidationError, InputError) as e:
        logger.warning(f"Validation error: {e}")
        raise HTTPException(status_code=status.HTTP_422_UNPROCESSABLE_ENTITY, detail=f"Invalid input: {e}")
    except MethodInapplicableError as e:
        raise HTTPException(status_code=status.HTTP_409_CONFLICT, detail=str(e))
    except Exception as e:
        logger.error(f"Error comparing schemes: {e}", exc_info=True)
        raise HTTPException(status_code=status.HTTP_500_INTERNAL_SERVER_ERROR, detail=str(e))

    provenance = make_provenance("compare", json.dumps({"spec_a": den.label, "spec_b": num.label}, sort_keys=True))
    return ComparisonDocument(spec_a=den.label, spec_b=num.label, result=result, provenance=provenance)


@router.get("/health")
async def health_check() -> dict[str, str]:
    """
    Health check endpoint.

    Returns:
        Status message
    """
    return {"status": "healthy", "service": "holder-regularity"}
