"""Independent check of comment and docstring stripping.

Usage: strip_oracle.py ORIGINAL STRIPPED [ORIGINAL STRIPPED ...]

For each pair prints `ok <path>` or `bad <path>: <reason>`. Exits 0 when
every pair is ok, 1 otherwise.

A pair is ok when the stripped source has no comment tokens and its AST
equals the AST of the original with every leading string-literal
statement removed from module, class and function bodies. A class or
function body left empty becomes a single `pass`.
"""

import ast
import io
import sys
import tokenize


def _is_doc(stmt):
    return (
        isinstance(stmt, ast.Expr)
        and isinstance(stmt.value, ast.Constant)
        and isinstance(stmt.value.value, str)
    )


class _Strip(ast.NodeTransformer):
    def _body(self, node, fill):
        self.generic_visit(node)
        while node.body and _is_doc(node.body[0]):
            node.body.pop(0)
        if fill and not node.body:
            node.body.append(ast.Pass())
        return node

    def visit_Module(self, node):
        return self._body(node, fill=False)

    def visit_FunctionDef(self, node):
        return self._body(node, fill=True)

    visit_AsyncFunctionDef = visit_FunctionDef
    visit_ClassDef = visit_FunctionDef


def expected_ast(source):
    return ast.dump(_Strip().visit(ast.parse(source)))


def comments(source):
    toks = tokenize.generate_tokens(io.StringIO(source).readline)
    return [t for t in toks if t.type == tokenize.COMMENT]


def check(original, stripped):
    try:
        got = ast.dump(ast.parse(stripped))
    except SyntaxError as e:
        return f"stripped source does not parse: {e}"
    if got != expected_ast(original):
        return "AST differs from expected"
    found = comments(stripped)
    if found:
        return f"comment left at line {found[0].start[0]}"
    return None


def main(argv):
    if len(argv) % 2:
        print("expected ORIGINAL STRIPPED pairs", file=sys.stderr)
        return 2
    failed = False
    for orig_path, stripped_path in zip(argv[0::2], argv[1::2]):
        with open(orig_path, encoding="utf-8", newline="") as f:
            original = f.read()
        with open(stripped_path, encoding="utf-8", newline="") as f:
            stripped = f.read()
        reason = check(original, stripped)
        if reason is None:
            print(f"ok {orig_path}")
        else:
            failed = True
            print(f"bad {orig_path}: {reason}")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
