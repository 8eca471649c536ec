"""Runs generated code against test blocks in a fresh namespace.

Reads {"code": str, "tests": [str], "timeout_s": number} from stdin and
writes {"results": [{"status", "message", "duration_ms"}], "all_passed"}
to stdout as one JSON line. Exit code 3 on a malformed request.
"""

import ast
import io
import json
import signal
import sys
import time


class _Timeout(BaseException):
    pass


def _on_alarm(signum, frame):
    raise _Timeout()


def _exec_with_timeout(source, namespace, timeout_s, filename):
    signal.setitimer(signal.ITIMER_REAL, timeout_s)
    try:
        exec(compile(source, filename, "exec"), namespace)
    finally:
        signal.setitimer(signal.ITIMER_REAL, 0)


def _describe(exc):
    text = str(exc)
    return f"{type(exc).__name__}: {text}" if text else type(exc).__name__


def _assertion_detail(test, namespace, timeout_s):
    """For `assert <expr> == <expected>`, report what <expr> evaluated to."""
    try:
        tree = ast.parse(test)
    except SyntaxError:
        return ""
    if len(tree.body) != 1 or not isinstance(tree.body[0], ast.Assert):
        return ""
    cond = tree.body[0].test
    if not (isinstance(cond, ast.Compare) and len(cond.ops) == 1 and isinstance(cond.ops[0], ast.Eq)):
        return ""
    scope = dict(namespace)
    expr = compile(ast.Expression(cond.left), "<detail>", "eval")
    signal.setitimer(signal.ITIMER_REAL, timeout_s)
    try:
        value = eval(expr, scope)
    except BaseException:
        return ""
    finally:
        signal.setitimer(signal.ITIMER_REAL, 0)
    return f" (left side evaluated to {value!r})"


def _parse_request(raw):
    request = json.loads(raw)
    code = request["code"]
    tests = request["tests"]
    timeout_s = request["timeout_s"]
    if not isinstance(code, str):
        raise ValueError("code must be a string")
    if not isinstance(tests, list) or not all(isinstance(t, str) for t in tests):
        raise ValueError("tests must be a list of strings")
    if isinstance(timeout_s, bool) or not isinstance(timeout_s, (int, float)) or timeout_s <= 0:
        raise ValueError("timeout_s must be a positive number")
    return code, tests, float(timeout_s)


def main():
    try:
        code, tests, timeout_s = _parse_request(sys.stdin.read())
    except Exception as exc:  # noqa: BLE001
        sys.stderr.write(f"malformed request: {_describe(exc)}\n")
        return 3

    out = sys.stdout
    sys.stdout = io.StringIO()
    signal.signal(signal.SIGALRM, _on_alarm)

    namespace = {"__name__": "__candidate__", "__builtins__": __builtins__}
    load_failure = None
    try:
        _exec_with_timeout(code, namespace, timeout_s, "<candidate>")
    except _Timeout:
        load_failure = ("timeout", f"code did not finish loading within {timeout_s}s")
    except BaseException as exc:  # noqa: BLE001
        load_failure = ("error", f"code failed to load: {_describe(exc)}")

    results = []
    for test in tests:
        if load_failure is not None:
            results.append({"status": load_failure[0], "message": load_failure[1], "duration_ms": 0.0})
            continue
        started = time.perf_counter()
        try:
            _exec_with_timeout(test, dict(namespace), timeout_s, "<test>")
            status, message = "pass", ""
        except _Timeout:
            status, message = "timeout", f"test exceeded {timeout_s}s"
        except AssertionError as exc:
            status = "fail"
            message = _describe(exc) + _assertion_detail(test, namespace, timeout_s)
        except BaseException as exc:  # noqa: BLE001
            status, message = "error", _describe(exc)
        elapsed = (time.perf_counter() - started) * 1000.0
        results.append({"status": status, "message": message, "duration_ms": round(elapsed, 3)})

    sys.stdout = out
    report = {"results": results, "all_passed": all(r["status"] == "pass" for r in results)}
    out.write(json.dumps(report) + "\n")
    out.flush()
    return 0


if __name__ == "__main__":
    sys.exit(main())
