import ast
from pathlib import Path

from jinja2 import Environment, FileSystemLoader

REPO_PATH = Path("src/sascsim")
DOCS_PATH = Path("docs")


def walk_directory(base: Path, jinja_entries: list):
    for path in sorted(base.iterdir()):
        name = path.name

        # Skip __pycache__, hidden files, non-Python files, and __init__.py
        if (
            name.startswith(".")
            or name == "__pycache__"
            or (path.is_file() and not name.endswith(".py"))
            or name == "__init__.py"
        ):
            continue

        if path.is_dir():
            walk_directory(path, jinja_entries)
        elif (data := extract_module_info(path)) is not None:
            relative = path.relative_to(REPO_PATH.parent)
            module_path = "/".join(relative.with_suffix("").parts)
            jinja_entries.append(
                {
                    "module": ".".join(relative.with_suffix("").parts),
                    "doc_string": data["doc_string"],
                    # pdoc writes one page per module under docs/
                    "link": f"{module_path}.html",
                    "classes": data["classes"],
                    "functions": data["functions"],
                }
            )


def extract_module_info(py_file: Path):
    try:
        tree = ast.parse(py_file.read_text(encoding="utf-8"))
    except SyntaxError as e:
        print(f"Syntax error in {py_file}: {e}")
        return None

    classes = []
    functions = []
    for node in ast.iter_child_nodes(tree):
        if isinstance(node, ast.ClassDef) and not node.name.startswith("_"):
            methods = [
                n.name
                for n in node.body
                if isinstance(n, ast.FunctionDef) and not n.name.startswith("_")
            ]
            classes.append(
                {
                    "name": node.name,
                    "doc_string": ast.get_docstring(node) or "[No docstring]",
                    "methods": methods,
                }
            )
        elif isinstance(node, ast.FunctionDef) and not node.name.startswith("_"):
            functions.append(node.name)

    if not classes and not functions:
        return None
    return {
        "doc_string": ast.get_docstring(tree) or "",
        "classes": classes,
        "functions": functions,
    }


entries = []
walk_directory(REPO_PATH, entries)


env = Environment(loader=FileSystemLoader("templates"), autoescape=True)
template = env.get_template("index_template.html")
html_output = template.render(entries=entries)

DOCS_PATH.mkdir(exist_ok=True)
(DOCS_PATH / "index.html").write_text(html_output, encoding="utf-8")
