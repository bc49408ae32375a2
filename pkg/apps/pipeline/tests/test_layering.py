"""
Tests for the import direction between apps
"""

import ast
from pathlib import Path

import pytest

APPS_DIR = Path(__file__).resolve().parents[2]


def analyses_imports(path):
    found = []
    for node in ast.walk(ast.parse(path.read_text())):
        if isinstance(node, ast.ImportFrom) and (node.module or '').startswith('apps.analyses'):
            found.append(node.module)
        elif isinstance(node, ast.Import):
            found.extend(a.name for a in node.names if a.name.startswith('apps.analyses'))
    return found


class TestLayering:
    """Test lower apps never import the analyses app"""

    @pytest.mark.parametrize('app', ['kernel', 'expressions', 'systems', 'rationalize', 'pipeline', 'fispo', 'probobs'])
    def test_no_analyses_imports(self, app):
        """Test no module of the app imports apps.analyses"""
        offenders = {str(path.relative_to(APPS_DIR)): analyses_imports(path)
                     for path in sorted((APPS_DIR / app).rglob('*.py'))}

        assert {path: names for path, names in offenders.items() if names} == {}
