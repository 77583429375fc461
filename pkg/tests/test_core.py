"""
Settings, exceptions, error handlers, metrics and decorators.
"""
import io
import json

import pytest
from pydantic import ValidationError

from app.core.config import Settings, get_settings, settings
from app.core.decorators import log_duration
from app.core.error_handlers import format_validation_errors, handle_exception
from app.core.exceptions import (
    EXIT_PROPERTY_VIOLATION,
    EXIT_USAGE,
    ConfigurationError,
    DimensionMismatchError,
    InvalidParameterError,
    PropertyViolationError,
    SequenceFileError,
)
from app.core.metrics import registry, write_metrics
from app.models.otfs import CampaignConfig


class TestSettings:
    """Environment-driven settings."""

    def test_defaults(self):
        assert settings.ZERO_TOLERANCE == 1e-9
        assert settings.SCHEMA_VERSION == 1
        assert settings.SIM_SNR_LIST == [0.0, 5.0, 10.0, 15.0, 20.0]

    def test_env_prefix(self, monkeypatch):
        monkeypatch.setenv("ZCZ_SIM_TRIALS", "40")
        monkeypatch.setenv("ZCZ_SIM_SNR_LIST", "0, 12.5")
        s = Settings()
        assert s.SIM_TRIALS == 40
        assert s.SIM_SNR_LIST == [0.0, 12.5]

    def test_rejects_nonpositive(self, monkeypatch):
        monkeypatch.setenv("ZCZ_ZERO_TOLERANCE", "0")
        with pytest.raises(ValidationError):
            Settings()

    def test_output_dir_override(self):
        assert get_settings("runs/a").OUTPUT_DIR == "runs/a"
        assert get_settings() is settings


class TestExceptions:
    """Exit codes and details."""

    def test_usage_errors(self):
        assert InvalidParameterError("bad", precondition="T > 3").exit_code == EXIT_USAGE
        assert SequenceFileError("bad", path="f.json").details == {"path": "f.json"}
        assert ConfigurationError("bad", [{"field": "x"}]).details["errors"] == [{"field": "x"}]

    def test_dimension_details(self):
        err = DimensionMismatchError("shape", expected=16, actual=15)
        assert err.details == {"expected": 16, "actual": 15}

    def test_property_violation(self):
        assert PropertyViolationError("zone broken").exit_code == EXIT_PROPERTY_VIOLATION


class TestErrorHandlers:
    """JSON error bodies."""

    def test_toolkit_error(self):
        stream = io.StringIO()
        code = handle_exception(InvalidParameterError("R must be odd", precondition="R odd"), "generate", stream)
        body = json.loads(stream.getvalue())
        assert code == EXIT_USAGE
        assert body["error"] == "InvalidParameterError"
        assert body["details"]["precondition"] == "R odd"

    def test_property_violation_code(self):
        stream = io.StringIO()
        assert handle_exception(PropertyViolationError("x"), "verify", stream) == EXIT_PROPERTY_VIOLATION

    def test_validation_error_becomes_configuration_error(self):
        stream = io.StringIO()
        try:
            CampaignConfig(trials=0, snr_list=[])
        except ValidationError as exc:
            code = handle_exception(exc, "otfs-sim", stream)
        body = json.loads(stream.getvalue())
        assert code == EXIT_USAGE
        assert body["error"] == "ConfigurationError"
        assert {e["field"] for e in body["details"]["errors"]} == {"trials", "snr_list"}

    def test_unexpected_error(self):
        stream = io.StringIO()
        assert handle_exception(RuntimeError("boom"), "af", stream) == EXIT_USAGE
        assert json.loads(stream.getvalue())["error"] == "InternalError"

    def test_format_validation_errors(self):
        with pytest.raises(ValidationError) as exc:
            CampaignConfig(velocities=[-1.0])
        errors = format_validation_errors(exc.value)
        assert errors[0]["field"] == "velocities"
        assert "nonnegative" in errors[0]["message"]


class TestMetrics:
    """Prometheus text output and timing decorator."""

    def test_write_metrics(self, tmp_path):
        text = write_metrics(tmp_path / "m" / "metrics.prom").read_text()
        assert "zcz_families_generated" in text
        assert "zcz_simulated_trials" in text

    def test_log_duration(self):
        @log_duration("unit-check")
        def double(x):
            return 2 * x

        before = registry.get_sample_value("zcz_operation_duration_seconds_count", {"operation": "unit-check"}) or 0
        assert double(4) == 8
        after = registry.get_sample_value("zcz_operation_duration_seconds_count", {"operation": "unit-check"})
        assert after == before + 1
