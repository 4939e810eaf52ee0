#pragma once

// A deliberately vulnerable page with CSS, JavaScript-string and HTML-text
// sinks, used for end-to-end proxy checks. Never expose it beyond loopback.

#include <httplib.h>

#include <string>

namespace ctxaudit::demo {

inline std::string render_vulnerable_page(const std::string& color, const std::string& id, const std::string& term) {
  std::string page;
  page += "<html>\n<body>\n<style>\nbody{\n  background-color: " + color + "\n}\n</style>\n";
  page +=
      "<form action=\"index.php\">\n"
      "  background Color :</td><td>\n"
      "  <input type=\"name\" name=\"color\" />\n"
      "  <input type=\"submit\" value=\"Change Color\" />\n"
      "  <input type=\"hidden\"\n"
      "    name=\"CSRFToken\" value=\"SECRET\">\n"
      "</form>\n";
  page +=
      "<script>\n"
      "  document.write(\"Username is: \");\n"
      "  var str = \"" + id + "\" ;\n"
      "  document.write(\"<text>\"+str+\"</text>\");\n"
      "</script>\n";
  page += "<h2> You were searching for:\n  '" + term + "'\n</h2>\n";
  // The original shells out to grep; the demo prints a fixed result line.
  page += "  Here is the result:\n  auditor:x:1001:1001::/home/auditor\n</body>\n</html>\n";
  return page;
}

inline void install_vulnerable_routes(httplib::Server& server) {
  server.Get(R"(/(index\.php)?)", [](const httplib::Request& req, httplib::Response& res) {
    res.set_content(render_vulnerable_page(req.get_param_value("color"), req.get_param_value("id"),
                                           req.get_param_value("term")),
                    "text/html; charset=utf-8");
  });
}

}  // namespace ctxaudit::demo
