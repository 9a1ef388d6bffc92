#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "gtm/gtm.hpp"
#include "support.hpp"

using namespace gtm;

namespace {
const SubroutineRegistry& reg() {
    static const SubroutineRegistry r = builtin_subroutines();
    return r;
}

bool has_error_code(const ParseResult& r, const std::string& code) {
    for (const Diagnostic& d : r.diagnostics)
        if (d.severity == Diagnostic::Severity::Error && d.code == code) return true;
    return false;
}
} // namespace

TEST_CASE("minimal source parses to a one-statement machine") {
    MachineSource src{"machine m; tapes 0:word; labels l0 lf; l0: write 0 '#' -> lf"};
    ParseResult r = parse_machine(src, reg());
    REQUIRE(r.ok());
    const Machine& m = *r.machine;
    CHECK(m.name == "m");
    CHECK(m.labels == std::vector<std::string>{"l0", "lf"});
    CHECK(m.final_label == "lf");
    CHECK(m.input_arity() == 0);
    CHECK(m.statements.size() == 1);
    const auto* w = std::get_if<WriteSym>(&m.statements.at("l0"));
    REQUIRE(w != nullptr);
    CHECK(w->symbol == '#');
    CHECK(w->next == "lf");
    // Inferred work alphabet covers the written symbol.
    CHECK(m.work_alphabet.find('#') != std::string::npos);
}

TEST_CASE("unknown labels are reported with a location") {
    MachineSource src{"machine m;\ntapes 0:word;\nlabels l0 lf;\nl0: right 0 -> l9"};
    ParseResult r = parse_machine(src, reg());
    CHECK_FALSE(r.ok());
    REQUIRE(has_error_code(r, "unknown-label"));
    for (const Diagnostic& d : r.diagnostics)
        if (d.code == "unknown-label") CHECK(d.location.line == 4);
}

TEST_CASE("statement totality is enforced") {
    MachineSource src{"machine m; tapes 0:word; labels l0 l1 lf; l0: right 0 -> l1"};
    ParseResult r = parse_machine(src, reg());
    CHECK_FALSE(r.ok());
    CHECK(has_error_code(r, "stm-not-total"));
}

TEST_CASE("other parse errors") {
    CHECK(has_error_code(parse_machine({"machine m; tapes 0:word; labels l0 lf; l0: 0 := nope() -> lf"}, reg()),
                         "unknown-fn"));
    CHECK(has_error_code(parse_machine({"machine m; tapes 0:word; labels l0 lf; l0: 0 := w_zip(0) -> lf"}, reg()),
                         "arity-mismatch"));
    CHECK(has_error_code(parse_machine({"machine m; tapes 0:word; labels l0 lf; l0: right 3 -> lf"}, reg()),
                         "bad-tape"));
    CHECK(has_error_code(parse_machine({"machine m; tapes 0:word; labels l0 lf; l0: right 0 -> lf; lf: right 0 -> l0"}, reg()),
                         "stmt-on-final"));
    CHECK(has_error_code(parse_machine({"machine m; tapes 0:word, 2:word; labels l0 lf; l0: right 0 -> lf"}, reg()),
                         "tape-gap"));
    CHECK(has_error_code(parse_machine({"machine m; tapes 0:wibble; labels l0 lf; l0: right 0 -> lf"}, reg()),
                         "unknown-carrier"));
    CHECK(has_error_code(parse_machine({"machine m; tapes 0:word; labels l0 lf; l0: if w_id(0) then lf else lf"}, reg()),
                         "fn-kind"));
    CHECK(has_error_code(parse_machine({"machine m; tapes 0:word, 1:rat; labels l0 lf; l0: 0 := w_id(1) -> lf"}, reg()),
                         "carrier-mismatch"));
    CHECK(has_error_code(parse_machine({"machine m; tapes 0:word labels"}, reg()), "syntax"));
}

TEST_CASE("explicit final marker and the last-label default agree") {
    ParseResult a = parse_machine({"machine m; tapes 0:word; labels l0 final lf; l0: right 0 -> lf"}, reg());
    ParseResult b = parse_machine({"machine m; tapes 0:word; labels l0 lf; l0: right 0 -> lf"}, reg());
    REQUIRE(a.ok());
    REQUIRE(b.ok());
    CHECK(machine_equal(*a.machine, *b.machine));
    // The marker may put the final label anywhere in the list.
    ParseResult c = parse_machine(
        {"machine m; tapes 0:word; labels final done l0; l0: right 0 -> done"}, reg());
    REQUIRE(c.ok());
    CHECK(c.machine->final_label == "done");
    CHECK(c.machine->initial_label() == "done");  // first declared stays initial
}

TEST_CASE("render round-trips the fixture machines") {
    std::vector<Machine> corpus{coin_machine(),        copy_word_machine(),
                                droplast_machine(),    branchy_word_machine(),
                                zipdrop_word_machine(), stream_adder_machine(),
                                abstract_adder_machine(), sri_adder_machine(),
                                oracle_apply_machine(), oracle_pipeline_machine(),
                                oracle_branch_machine()};
    // Split machines exercise the explicit input-tape list.
    corpus.push_back(split_H(oracle_pipeline_machine(), "s_not"));
    corpus.push_back(split_G(oracle_pipeline_machine(), "s_not"));
    for (const Machine& m : corpus) {
        std::string text = render_machine(m);
        CHECK(render_machine(m) == text);  // deterministic
        ParseResult r = parse_machine({text}, reg());
        REQUIRE(r.ok());
        CHECK(machine_equal(*r.machine, m));
    }
}

TEST_CASE("split-G machines carry a non-contiguous input list through the format") {
    Machine mg = split_G(oracle_apply_machine(), "s_not");
    REQUIRE(mg.input_tapes == std::vector<int>{1, 2});
    std::string text = render_machine(mg);
    CHECK(text.find("inputs tapes 1, 2;") != std::string::npos);
    ParseResult r = parse_machine({text}, reg());
    REQUIRE(r.ok());
    CHECK(r.machine->input_tapes == mg.input_tapes);
}

TEST_CASE("render lists exactly the declared tapes") {
    // A machine without work tapes (L = k) declares only input/output tapes.
    std::string text = render_machine(copy_word_machine());
    CHECK(text.find("tapes 0:word, 1:word;") != std::string::npos);
    CHECK(text.find("2:") == std::string::npos);
}

TEST_CASE("render round-trips randomly generated machines") {
    SplitMix64 rng(2024);
    for (int i = 0; i < 60; ++i) {
        Machine m = testsupport::random_machine(rng);
        ParseResult r = parse_machine({render_machine(m)}, reg());
        REQUIRE(r.ok());
        CHECK(machine_equal(*r.machine, m));
    }
}

TEST_CASE("validation catches alphabet violations") {
    Machine m = copy_word_machine();
    m.work_alphabet = "0_";  // '0' is in the input alphabet
    auto diags = validate_machine(m);
    bool found = false;
    for (const Diagnostic& d : diags)
        if (d.code == "alphabet-overlap") found = true;
    CHECK(found);

    Machine m2 = copy_word_machine();
    m2.blank = '!';
    auto diags2 = validate_machine(m2);
    found = false;
    for (const Diagnostic& d : diags2)
        if (d.code == "blank-missing") found = true;
    CHECK(found);
}

TEST_CASE("validation warns about unreachable labels") {
    Machine m = MachineBuilder("island")
                    .tapes({"word"})
                    .inputs(0)
                    .label("l0")
                    .label("lorphan")
                    .final_label("lf")
                    .move_right("l0", 0, "lf")
                    .move_right("lorphan", 0, "lorphan")
                    .build(builtin_subroutines());
    auto diags = validate_machine(m);
    bool warned = false;
    for (const Diagnostic& d : diags)
        if (d.severity == Diagnostic::Severity::Warning && d.code == "unreachable") warned = true;
    CHECK(warned);
    for (const Diagnostic& d : diags) CHECK(d.severity != Diagnostic::Severity::Error);
}

TEST_CASE("fixtures validate cleanly") {
    for (const Machine& m : {coin_machine(), stream_adder_machine(), abstract_adder_machine(),
                             zipdrop_word_machine(), branchy_word_machine()}) {
        for (const Diagnostic& d : validate_machine(m))
            CHECK(d.severity != Diagnostic::Severity::Error);
    }
}

TEST_CASE("malformed sources always yield located errors") {
    std::vector<std::string> bad{
        "machine m; tapes 0:word; labels l0 lf; l0: right 9 -> lf",
        "machine m; tapes 0:word; labels l0 lf; l0: hop 0 -> lf",
        "machine m; tapes 0:word; labels l0 lf; lf: right 0 -> l0",
        "machine m; tapes 0:word; labels l0 l1 lf; l0: right 0 -> lf",
        "machine m; tapes; labels l0 lf;",
        "machine m; tapes 0:word; labels l0 lf; l0: write 0 # -> lf",
        "machine",
    };
    for (const std::string& text : bad) {
        ParseResult r = parse_machine({text}, reg());
        CAPTURE(text);
        CHECK_FALSE(r.ok());
        bool located_error = false;
        for (const Diagnostic& d : r.diagnostics)
            if (d.severity == Diagnostic::Severity::Error &&
                (d.location.line > 0 || d.location.column > 0))
                located_error = true;
        CHECK(located_error);
    }
}
