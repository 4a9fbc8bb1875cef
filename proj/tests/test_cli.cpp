// Drives the installed binary end to end: exit codes, verdict JSON against
// the checked-in schema, translate-then-solve agreement, witness replay.

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

using Json = nlohmann::json;

namespace {

int g_failures = 0;

#define CHECK_MSG(cond, msg)                                                                   \
    do {                                                                                       \
        if (!(cond)) {                                                                         \
            std::cerr << "FAIL " << __FILE__ << ":" << __LINE__ << ": " << msg << "\n";        \
            g_failures++;                                                                      \
        }                                                                                      \
    } while (0)

struct RunResult {
    int exit_code;
    std::string output;
};

RunResult run(const std::string& args) {
    std::string cmd = std::string(VRHR_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe)
        return {-1, "popen failed"};
    std::string out;
    std::array<char, 4096> buf;
    while (fgets(buf.data(), (int)buf.size(), pipe))
        out += buf.data();
    int status = pclose(pipe);
    return {WEXITSTATUS(status), out};
}

std::string spec(const std::string& name) { return std::string(VRHR_SPECS_DIR) + "/" + name; }

// Minimal structural validator for the subset of JSON Schema the verdict
// schema uses: type, required, properties, items, enum, oneOf.
bool validates(const Json& schema, const Json& value, std::string& why) {
    if (schema.contains("oneOf")) {
        for (const auto& alt : schema["oneOf"]) {
            std::string w;
            if (validates(alt, value, w))
                return true;
        }
        why = "no oneOf alternative matched";
        return false;
    }
    if (schema.contains("type")) {
        const std::string t = schema["type"];
        bool ok = (t == "object" && value.is_object()) || (t == "array" && value.is_array()) ||
                  (t == "string" && value.is_string()) || (t == "null" && value.is_null()) ||
                  (t == "integer" && value.is_number_integer()) ||
                  (t == "number" && value.is_number()) || (t == "boolean" && value.is_boolean());
        if (!ok) {
            why = "expected type " + t;
            return false;
        }
    }
    if (schema.contains("enum")) {
        bool ok = false;
        for (const auto& e : schema["enum"])
            ok = ok || e == value;
        if (!ok) {
            why = "value not in enum";
            return false;
        }
    }
    if (schema.contains("required"))
        for (const auto& key : schema["required"])
            if (!value.contains(key.get<std::string>())) {
                why = "missing required key " + key.get<std::string>();
                return false;
            }
    if (schema.contains("properties") && value.is_object())
        for (auto it = schema["properties"].begin(); it != schema["properties"].end(); ++it)
            if (value.contains(it.key()) && !validates(it.value(), value[it.key()], why)) {
                why = it.key() + ": " + why;
                return false;
            }
    if (schema.contains("items") && value.is_array())
        for (const auto& item : value)
            if (!validates(schema["items"], item, why)) {
                why = "items: " + why;
                return false;
            }
    return true;
}

} // namespace

int main() {
    // Well-formed specs pass `check`.
    for (const std::string name :
         {"k_nm.spec", "clique.spec", "star.spec", "azure.spec", "import_demo.spec"}) {
        RunResult r = run("check " + spec(name));
        CHECK_MSG(r.exit_code == 0, name << " should check clean, got " << r.exit_code << "\n"
                                         << r.output);
    }

    // Malformed input exits 2 with a position.
    {
        std::ofstream bad("cli_bad.spec");
        bad << "process P {\n  places a b;\n}\n";
        bad.close();
        RunResult r = run("check cli_bad.spec");
        CHECK_MSG(r.exit_code == 2, "malformed spec should exit 2, got " << r.exit_code);
        CHECK_MSG(r.output.find(":2:") != std::string::npos, "diagnostic lacks position");
    }

    // Quantifiers are refused with a pointed message.
    {
        std::ofstream q("cli_quant.spec");
        q << "formula f = forall x. x = x;\n";
        q.close();
        RunResult r = run("check cli_quant.spec");
        CHECK_MSG(r.exit_code == 2, "quantifier should exit 2");
        CHECK_MSG(r.output.find("quantified formulas unsupported") != std::string::npos,
                  "missing quantifier message: " << r.output);
    }

    // The worked reachability instance is positive within six steps.
    {
        RunResult r = run("prp " + spec("k_nm.spec") + " --max-steps 6");
        CHECK_MSG(r.exit_code == 0, "prp should be positive, got " << r.exit_code << "\n"
                                                                   << r.output);
        CHECK_MSG(r.output.find("POSITIVE") != std::string::npos, "status missing");
    }

    // JSON verdict validates against the checked-in schema and replays.
    {
        RunResult r = run("prp " + spec("k_nm.spec") + " --json");
        CHECK_MSG(r.exit_code == 0, "json prp failed: " << r.output);
        Json verdict = Json::parse(r.output);
        std::ifstream sf(std::string(VRHR_SCHEMA_DIR) + "/verdict.schema.json");
        Json schema = Json::parse(sf);
        std::string why;
        CHECK_MSG(validates(schema, verdict, why), "schema violation: " << why);
        CHECK_MSG(verdict["status"] == "POSITIVE", "expected POSITIVE");
        CHECK_MSG(verdict["witness"]["system"]["vertices"].size() == 3,
                  "witness should be the 2x1 instance");

        std::ofstream vf("cli_verdict.json");
        vf << verdict.dump();
        vf.close();
        RunResult rv = run("replay " + spec("k_nm.spec") + " --verdict cli_verdict.json");
        CHECK_MSG(rv.exit_code == 0, "replay should verify: " << rv.output);

        // A corrupted witness is rejected.
        verdict["witness"]["valuation"]["y"] = 7;
        std::ofstream cf("cli_corrupt.json");
        cf << verdict.dump();
        cf.close();
        RunResult rc = run("replay " + spec("k_nm.spec") + " --verdict cli_corrupt.json");
        CHECK_MSG(rc.exit_code == 1, "corrupted witness should exit 1, got " << rc.exit_code);
    }

    // Negative and truncated statuses map to exit codes 1 and 3.
    {
        RunResult r = run("prp " + spec("k_nm.spec") + " --max-vertices 2");
        CHECK_MSG(r.exit_code == 1, "should be negative up to bound, got " << r.exit_code);
        CHECK_MSG(r.output.find("NEGATIVE-up-to-bound") != std::string::npos, "status missing");

        RunResult t = run("prp " + spec("k_nm.spec") + " --max-states 2");
        CHECK_MSG(t.exit_code == 3, "should be truncated, got " << t.exit_code);
    }

    // Translate, re-check, and solve the routed instance: same verdict.
    {
        RunResult tr = run("translate " + spec("k_nm.spec") + " -o cli_knm_hr.spec");
        CHECK_MSG(tr.exit_code == 0, "translate failed: " << tr.output);
        RunResult ck = run("check cli_knm_hr.spec");
        CHECK_MSG(ck.exit_code == 0, "translated spec should check clean: " << ck.output);
        RunResult pr = run("prp cli_knm_hr.spec");
        CHECK_MSG(pr.exit_code == 0, "routed prp should stay positive: " << pr.output);

        // Base cap 2 keeps systems of at most two processes; their routed
        // counterparts stay below seven vertices.
        RunResult neg = run("prp " + spec("k_nm.spec") + " --max-vertices 2");
        RunResult neg_hr = run("prp cli_knm_hr.spec --max-vertices 6");
        CHECK_MSG(neg.exit_code == 1 && neg_hr.exit_code == 1,
                  "negative verdicts should agree: " << neg.exit_code << " vs "
                                                     << neg_hr.exit_code);
    }

    // Enumeration reports its tail status.
    {
        RunResult r = run("enumerate " + spec("k_nm.spec") + " --max-steps 4");
        CHECK_MSG(r.exit_code == 0, "enumeration should be exhaustive: " << r.output);
        CHECK_MSG(r.output.find("exhausted") != std::string::npos, "tail status missing");
        RunResult t = run("enumerate " + spec("k_nm.spec") + " --max-graphs 2");
        CHECK_MSG(t.exit_code == 3, "capped enumeration should exit 3, got " << t.exit_code);
        CHECK_MSG(t.output.find("truncated") != std::string::npos, "truncation marker missing");
    }

    // Evaluation and DOT output.
    {
        RunResult r = run("eval " + spec("k_nm.spec") +
                          " --term \"union(vertex[p], vertex[q])\"");
        CHECK_MSG(r.exit_code == 0, "eval failed: " << r.output);
        CHECK_MSG(r.output.find("digraph") != std::string::npos, "missing dot output");

        RunResult d = run("dot " + spec("k_nm.spec") + " --process Once");
        CHECK_MSG(d.exit_code == 0 && d.output.find("digraph") != std::string::npos,
                  "process dot failed");

        RunResult b = run("dot " + spec("k_nm.spec") +
                          " --term \"relab[](add_edge[(send,recv); p -> q](union(vertex[p], "
                          "vertex[q])))\" --behavior");
        CHECK_MSG(b.exit_code == 0 && b.output.find("digraph") != std::string::npos,
                  "behavior dot failed");

        RunResult e = run("eval " + spec("k_nm.spec") + " --grammar G --derivation "
                          "'{\"axiom\":\"S\",\"steps\":[{\"rule\":0,\"position\":0},"
                          "{\"rule\":1,\"position\":0}]}'");
        CHECK_MSG(e.exit_code == 0, "derivation eval failed: " << e.output);
    }

    // The equivalence checks pass on a small slice and on random terms.
    {
        RunResult r =
            run("equiv " + spec("k_nm.spec") + " --max-steps 4 --max-vertices 3 --max-len 4");
        CHECK_MSG(r.exit_code == 0, "equiv failed (" << r.exit_code << "):\n" << r.output);
        RunResult rr = run("equiv " + spec("k_nm.spec") + " --random 25 --seed 7");
        CHECK_MSG(rr.exit_code == 0, "random equiv failed:\n" << rr.output);
    }

    if (g_failures == 0)
        std::cout << "cli tests passed\n";
    return g_failures == 0 ? 0 : 1;
}
