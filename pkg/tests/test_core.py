"""Unit tests for exceptions, field locations, validators and profiles."""

import math

import pytest

from dflcarbon.core import units
from dflcarbon.core.exceptions import (
    ConfigError,
    DflCarbonError,
    SchemaError,
    UnknownMedium,
    ValidationError,
)
from dflcarbon.core.field_location import FieldLocation
from dflcarbon.core.profiles import (
    MEDIUM_ENERGY_PER_BYTE,
    CommMedium,
    HardwareProfile,
    MediumKind,
    RegionProfile,
    ingest_medium,
    parse_medium_kind,
)
from dflcarbon.core.validators import (
    require_field,
    validate_fraction,
    validate_min_int,
    validate_number,
    validate_open_interval,
    validate_pue,
    validate_seed,
)


class TestFieldLocation:
    """Test FieldLocation formatting."""

    def test_nested_path(self):
        """Keys and list indexes build a dotted path."""
        loc = FieldLocation("s.json").child("nodes").child(0).child("region").child(
            "renewable_ratio")
        assert str(loc) == "s.json:nodes[0].region.renewable_ratio"

    def test_row_location(self):
        """CSV rows show the row number before the column."""
        loc = FieldLocation("reg.csv", row=3).child("tdp_watts")
        assert str(loc) == "reg.csv:row 3:tdp_watts"

    def test_source_only(self):
        assert str(FieldLocation("a.json")) == "a.json"


class TestExceptions:
    """Test the exception hierarchy."""

    def test_message_with_location(self):
        error = ValidationError("bad", location=FieldLocation("f.json", "rounds"),
                                error_code="V004")
        assert str(error) == "f.json:rounds: bad"
        assert error.error_code == "V004"

    def test_message_without_location(self):
        assert str(DflCarbonError("plain")) == "plain"

    def test_hierarchy(self):
        assert issubclass(SchemaError, ConfigError)
        assert issubclass(UnknownMedium, ConfigError)
        assert issubclass(ConfigError, DflCarbonError)


class TestValidators:
    """Test validate_* helpers."""

    LOC = FieldLocation("t.json", "x")

    def test_require_field_missing(self):
        with pytest.raises(SchemaError) as exc:
            require_field({}, "rounds", FieldLocation("t.json"))
        assert exc.value.error_code == "C001"
        assert "rounds" in str(exc.value)

    def test_require_field_not_object(self):
        with pytest.raises(SchemaError):
            require_field([1], "rounds", self.LOC)

    def test_number_rejects_bool_and_string(self):
        with pytest.raises(SchemaError):
            validate_number(True, self.LOC)
        with pytest.raises(SchemaError):
            validate_number("1", self.LOC)

    def test_number_rejects_nan(self):
        with pytest.raises(ValidationError) as exc:
            validate_number(math.nan, self.LOC)
        assert exc.value.error_code == "V008"

    @pytest.mark.parametrize("value", [0.0, 0.5, 1.0])
    def test_fraction_accepts(self, value):
        assert validate_fraction(value, self.LOC) == value

    @pytest.mark.parametrize("value", [-0.01, 1.5])
    def test_fraction_rejects(self, value):
        with pytest.raises(ValidationError) as exc:
            validate_fraction(value, self.LOC)
        assert exc.value.error_code == "V001"

    def test_min_int(self):
        assert validate_min_int(3, 2, self.LOC) == 3
        with pytest.raises(ValidationError):
            validate_min_int(1, 2, self.LOC)
        with pytest.raises(SchemaError):
            validate_min_int(2.0, 2, self.LOC)

    def test_open_interval(self):
        assert validate_open_interval(75, 0, 100, self.LOC) == 75.0
        for bad in (0, 100):
            with pytest.raises(ValidationError):
                validate_open_interval(bad, 0, 100, self.LOC)

    def test_pue(self):
        assert validate_pue(1.0, self.LOC) == 1.0
        with pytest.raises(ValidationError) as exc:
            validate_pue(0.9, self.LOC)
        assert exc.value.error_code == "V006"

    def test_seed_range(self):
        assert validate_seed(2 ** 64 - 1, self.LOC) == 2 ** 64 - 1
        with pytest.raises(ValidationError):
            validate_seed(2 ** 64, self.LOC)
        with pytest.raises(ValidationError):
            validate_seed(-1, self.LOC)


class TestMedia:
    """Test built-in communication media."""

    def test_table_constants(self):
        """Built-in media carry the published per-byte energies exactly."""
        assert ingest_medium(MediumKind.WIRED_ELECTRICAL).energy_per_byte == 8.0e-11
        assert ingest_medium(MediumKind.OPTICAL_FIBER).energy_per_byte == 3.52e-14
        assert ingest_medium(MediumKind.MOBILE_4G5G).energy_per_byte == 3.33e-8
        assert ingest_medium(MediumKind.WIFI).energy_per_byte == 5.51e-4

    def test_names_and_aliases(self):
        assert parse_medium_kind("wired") is MediumKind.WIRED_ELECTRICAL
        assert parse_medium_kind(" WiFi ") is MediumKind.WIFI
        assert parse_medium_kind("optical_fiber") is MediumKind.OPTICAL_FIBER
        assert ingest_medium("mobile").kind is MediumKind.MOBILE_4G5G

    def test_unknown_medium(self):
        with pytest.raises(UnknownMedium) as exc:
            ingest_medium("carrier_pigeon")
        assert exc.value.error_code == "C005"

    def test_custom_has_no_builtin_constant(self):
        with pytest.raises(UnknownMedium):
            ingest_medium(MediumKind.CUSTOM)
        assert MediumKind.CUSTOM not in MEDIUM_ENERGY_PER_BYTE

    def test_energy_per_byte_positive(self):
        with pytest.raises(ValidationError):
            CommMedium(MediumKind.CUSTOM, 0.0)


class TestProfiles:
    """Test profile invariants."""

    def test_region_presets(self):
        assert RegionProfile.preset("ES").grid_carbon_intensity == 217.422
        assert RegionProfile.preset("ch", 0.5) == RegionProfile("CH", 41.279, 0.5)

    def test_unknown_region_preset(self):
        with pytest.raises(ValidationError):
            RegionProfile.preset("XX")

    def test_renewable_ratio_range(self):
        with pytest.raises(ValidationError):
            RegionProfile("ES", 217.422, 1.2)

    def test_hardware_invariants(self):
        with pytest.raises(ValidationError):
            HardwareProfile(0.9, 200, 1.0, 0.5)
        with pytest.raises(ValidationError):
            HardwareProfile(1.0, 0, 1.0, 0.5)
        with pytest.raises(ValidationError):
            HardwareProfile(1.0, 200, 1.1, 0.5)


class TestUnits:
    """Test energy unit conversion."""

    def test_kwh_factor(self):
        assert units.joules_to_kwh(3.6e6) == 1.0
        assert units.kwh_to_joules(0.2) == 720000.0
