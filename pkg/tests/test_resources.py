import json

import pytest

from factor_bounds.resources import Fixtures, Schemas


class TestResources:
    """Tests for locating the shipped data files."""

    def test_fixture_names(self):
        """Test that fixture names drop their extension."""
        names = Fixtures().names()
        assert len(names) == 13
        assert "extremal_pairs" in names
        assert names == sorted(names)

    def test_get_file_adds_extension(self):
        """Test that get_file accepts names with or without extension."""
        fixtures = Fixtures()
        assert fixtures.get_file("extremal_pairs") == fixtures.get_file("extremal_pairs.json")
        assert fixtures.get_file("extremal_pairs").is_file()

    def test_files_match_names(self):
        """Test that files() lists one existing path per name."""
        fixtures = Fixtures()
        files = fixtures.files()
        assert [path.stem for path in files] == fixtures.names()
        assert all(path.is_file() for path in files)

    def test_schema_file(self):
        """Test that the fixture schema is found and parses."""
        schemas = Schemas()
        assert schemas.names() == ["fixture"]
        path = schemas.get_file("fixture")
        assert path.name == "fixture.schema.json"
        assert json.loads(path.read_text())["type"] == "object"

    @pytest.mark.parametrize(
        "resource, extension", [(Fixtures, ".json"), (Schemas, ".schema.json")]
    )
    def test_file_extension(self, resource, extension):
        """Test the extension of each resource type."""
        assert resource().file_extension == extension
