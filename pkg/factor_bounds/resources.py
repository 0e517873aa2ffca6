import abc
import importlib.resources
import pathlib
from typing import Final, Literal

ResourceTypeT = Literal["fixtures", "schemas"]
FileExtensionT = Literal[".json", ".schema.json"]

RESOURCE_EXTENSIONS: Final[dict[ResourceTypeT, FileExtensionT]] = {
    "fixtures": ".json",
    "schemas": ".schema.json",
}


class Resource(abc.ABC):
    """Locate project data files."""

    path: pathlib.Path

    def __init__(self):
        """Define resource path."""
        self.path = self._get_path()

    def _get_path(self) -> pathlib.Path:
        """Set the path to the resource directory."""
        filesystem_path = pathlib.Path(__file__).parents[1] / self.resource_type

        if filesystem_path.exists():
            # Development case: the repository root holds the data
            return filesystem_path
        # Installed case: the wheel carries the data inside the package
        resource_path = importlib.resources.files("factor_bounds") / "data" / self.resource_type
        return pathlib.Path(str(resource_path))

    @property
    @abc.abstractmethod
    def resource_type(self) -> ResourceTypeT:
        """Return the type of resource."""
        pass

    @property
    def file_extension(self) -> FileExtensionT:
        """Return the file extension for this resource type."""
        return RESOURCE_EXTENSIONS[self.resource_type]

    def get_file(self, filename: str) -> pathlib.Path:
        """
        Return the full path to a data file.

        Args:
            filename: The file name, with or without its extension

        Returns:
            Path to the file
        """
        if not filename.endswith(self.file_extension):
            filename += self.file_extension
        return self.path / filename

    def names(self) -> list[str]:
        """
        Return the sorted file names, without extension.

        Returns:
            List of names accepted by ``get_file``
        """
        return sorted(
            file.name.removesuffix(self.file_extension)
            for file in self.path.iterdir()
            if file.is_file() and file.name.endswith(self.file_extension)
        )

    def files(self) -> list[pathlib.Path]:
        """
        Return the data files in name order.

        Returns:
            List of paths
        """
        return [self.get_file(name) for name in self.names()]


class Fixtures(Resource):
    """Shipped tables of printed factorizations and records."""

    RESOURCE_TYPE: Final[Literal["fixtures"]] = "fixtures"

    @property
    def resource_type(self) -> Literal["fixtures"]:
        """Return the type of resource."""
        return self.RESOURCE_TYPE


class Schemas(Resource):
    """JSON schemas for the fixture files."""

    RESOURCE_TYPE: Final[Literal["schemas"]] = "schemas"

    @property
    def resource_type(self) -> Literal["schemas"]:
        """Return the type of resource."""
        return self.RESOURCE_TYPE
