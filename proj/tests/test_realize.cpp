#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "gtm/gtm.hpp"
#include "support.hpp"

using namespace gtm;

namespace {

const SubroutineRegistry& reg() {
    static const SubroutineRegistry r = builtin_subroutines();
    return r;
}

const MultiFunction& multi(const char* name) {
    return std::get<MultiFunction>(*reg().find(name));
}

std::vector<std::vector<CarrierValue>> rational_pair_samples(std::uint64_t seed, int count) {
    SplitMix64 rng(seed);
    std::vector<std::vector<CarrierValue>> samples;
    for (int i = 0; i < count; ++i)
        samples.push_back({real_value(testsupport::random_rational(rng)),
                           real_value(testsupport::random_rational(rng))});
    return samples;
}

// A realizer that ignores its arguments and always names 0.
MultiFunction garbage_adder() {
    return MultiFunction::single_valued(
        "garbage", {"stream", "stream"}, "stream",
        [](std::span<const CarrierValue>) -> std::optional<CarrierValue> {
            return stream_value(rho_encode(Rational(0)));
        });
}

// A realizer whose output stream never reaches any useful precision.
MultiFunction stalling_adder() {
    return MultiFunction::single_valued(
        "stalling", {"stream", "stream"}, "stream",
        [](std::span<const CarrierValue>) -> std::optional<CarrierValue> {
            return stream_value(interval_record_stream(
                [](std::size_t) { return Interval(Rational(0), Rational(1)); }));
        });
}

// Adds the records but shifts every endpoint; wrong by a fixed offset.
MultiFunction shifted_adder() {
    return MultiFunction::single_valued(
        "shifted", {"stream", "stream"}, "stream",
        [](std::span<const CarrierValue> a) -> std::optional<CarrierValue> {
            Stream sum = interval_add(a[0].as_stream(), a[1].as_stream());
            auto reader = std::make_shared<IntervalRecordReader>(sum);
            return stream_value(interval_record_stream([reader](std::size_t) {
                Interval iv = reader->next();
                return Interval(iv.lo + Rational(1, 8), iv.hi + Rational(1, 8));
            }));
        });
}

std::vector<MultiRepresentation> rho3() {
    MultiRepresentation rho = rho_representation();
    return {rho, rho, rho};
}

} // namespace

TEST_CASE("interval addition realizes rational addition") {
    auto samples = rational_pair_samples(41, 25);
    auto reports = check_realization(multi("ivadd"), multi("real_add"),
                                     std::span(rho3()).subspan(0, 2), rho_representation(),
                                     samples, 50);
    REQUIRE(reports.size() == samples.size());
    for (const SampleReport& r : reports) CHECK(r.verdict == SampleVerdict::Verified);
}

TEST_CASE("a wrong realizer is refuted") {
    std::vector<std::vector<CarrierValue>> samples{
        {real_value(Rational(1)), real_value(Rational(1))}};
    auto reports = check_realization(garbage_adder(), multi("real_add"),
                                     std::span(rho3()).subspan(0, 2), rho_representation(),
                                     samples, 20);
    REQUIRE(reports.size() == 1);
    CHECK(reports[0].verdict == SampleVerdict::Refuted);
}

TEST_CASE("a realizer that never reaches the precision is inconclusive") {
    std::vector<std::vector<CarrierValue>> samples{
        {real_value(Rational(0)), real_value(Rational(0))}};
    auto reports = check_realization(stalling_adder(), multi("real_add"),
                                     std::span(rho3()).subspan(0, 2), rho_representation(),
                                     samples, 20);
    REQUIRE(reports.size() == 1);
    CHECK(reports[0].verdict == SampleVerdict::Inconclusive);
}

TEST_CASE("samples outside the abstract domain are skipped") {
    MultiFunction partial_g = MultiFunction::single_valued(
        "partial", {"real"}, "real",
        [](std::span<const CarrierValue> a) -> std::optional<CarrierValue> {
            if (a[0].as_rational() == 0) return std::nullopt;
            return a[0];
        });
    MultiFunction f = MultiFunction::single_valued(
        "fid", {"stream"}, "stream",
        [](std::span<const CarrierValue> a) -> std::optional<CarrierValue> { return a[0]; });
    std::vector<std::vector<CarrierValue>> samples{{real_value(Rational(0))},
                                                   {real_value(Rational(2))}};
    std::vector<MultiRepresentation> reps{rho_representation()};
    auto reports = check_realization(f, partial_g, reps, rho_representation(), samples, 10);
    REQUIRE(reports.size() == 2);
    CHECK(reports[0].verdict == SampleVerdict::Skipped);
    CHECK(reports[1].verdict == SampleVerdict::Verified);
}

TEST_CASE("lowering replaces carriers and subroutines but not the skeleton") {
    Machine n = abstract_adder_machine();
    Machine m = lower_machine(n, adder_realizer_table());
    CHECK(m.labels == n.labels);
    CHECK(m.final_label == n.final_label);
    CHECK(m.work_alphabet == n.work_alphabet);
    CHECK(m.input_tapes == n.input_tapes);
    CHECK(m.carriers == std::vector<std::string>{"stream", "stream", "stream"});
    REQUIRE(m.statements.size() == n.statements.size());
    for (const auto& [label, stmt] : n.statements)
        CHECK(statement_equal(stmt, m.statements.at(label)));
    CHECK(build_graph(m).edges == build_graph(n).edges);
    // The fn id still resolves, now to the name-level function.
    const auto* lowered = std::get_if<MultiFunction>(&m.subroutine("real_add"));
    REQUIRE(lowered != nullptr);
    CHECK(lowered->result_carrier == "stream");
}

TEST_CASE("lowering failures name the label and subroutine") {
    Machine n = abstract_adder_machine();
    RealizerTable rt = adder_realizer_table();
    rt.realizers.clear();
    try {
        lower_machine(n, rt);
        FAIL("expected a lowering error");
    } catch (const MachineError& e) {
        std::string msg = e.what();
        CHECK(msg.find("real_add") != std::string::npos);
        CHECK(msg.find("l0") != std::string::npos);
    }

    RealizerTable wrong = adder_realizer_table();
    wrong.realizers.insert_or_assign("real_add", *reg().find("s_not"));  // wrong arity
    CHECK_THROWS_AS(lower_machine(n, wrong), MachineError);

    RealizerTable short_reps = adder_realizer_table();
    short_reps.tape_reps.pop_back();
    CHECK_THROWS_AS(lower_machine(n, short_reps), MachineError);
}

TEST_CASE("machine-level realization checks verify the lowered adder") {
    Machine n = abstract_adder_machine();
    Machine m = lower_machine(n, adder_realizer_table());
    auto samples = rational_pair_samples(77, 20);
    std::vector<MultiRepresentation> in_reps{rho_representation(), rho_representation()};
    auto reports =
        check_machine_realization_empirical(m, n, in_reps, rho_representation(), samples, 50);
    for (const SampleReport& r : reports) CHECK(r.verdict == SampleVerdict::Verified);
}

TEST_CASE("a broken lowering is caught empirically") {
    Machine n = abstract_adder_machine();
    RealizerTable rt = adder_realizer_table();
    rt.realizers.insert_or_assign("real_add", shifted_adder());
    Machine m = lower_machine(n, rt);
    auto samples = rational_pair_samples(78, 10);
    std::vector<MultiRepresentation> in_reps{rho_representation(), rho_representation()};
    auto reports =
        check_machine_realization_empirical(m, n, in_reps, rho_representation(), samples, 20);
    int refuted = 0;
    for (const SampleReport& r : reports)
        if (r.verdict == SampleVerdict::Refuted) ++refuted;
    CHECK(refuted == static_cast<int>(samples.size()));
}

TEST_CASE("abstract inputs outside the domain are skipped by the machine check") {
    SubroutineRegistry extended = builtin_subroutines();
    extended.add(MultiFunction::single_valued(
        "real_inv", {"real"}, "real",
        [](std::span<const CarrierValue> a) -> std::optional<CarrierValue> {
            if (a[0].as_rational() == 0) return std::nullopt;
            return real_value(1 / a[0].as_rational());
        }));
    Machine n = MachineBuilder("rinv")
                    .tapes({"real", "real"})
                    .inputs(1)
                    .label("l0")
                    .final_label("lf")
                    .assign("l0", 0, "real_inv", {1}, "lf")
                    .build(extended);
    // Identity "lowering": same machine checked against itself via identity reps.
    std::vector<MultiRepresentation> in_reps{identity_representation("real")};
    std::vector<std::vector<CarrierValue>> samples{{real_value(Rational(0))},
                                                   {real_value(Rational(3))}};
    auto reports = check_machine_realization_empirical(n, n, in_reps,
                                                       identity_representation("real"), samples, 5);
    REQUIRE(reports.size() == 2);
    CHECK(reports[0].verdict == SampleVerdict::Skipped);
    CHECK(reports[1].verdict == SampleVerdict::Verified);
}

TEST_CASE("word-machine generation preserves the skeleton and checks classes") {
    Machine n = stream_adder_machine();
    Machine m = generate_word_machine(n, adder_generators());
    CHECK(m.labels == n.labels);
    CHECK(build_graph(m).edges == build_graph(n).edges);
    for (const std::string& c : m.carriers) CHECK(c == "word");
    for (const auto& [label, stmt] : n.statements)
        CHECK(statement_equal(stmt, m.statements.at(label)));

    std::map<std::string, WordFunction> wrong;
    wrong.emplace("ivadd", wf_first_is0("ivadd"));  // monotone-constant on an assignment
    CHECK_THROWS_AS(generate_word_machine(n, wrong), ClassViolationError);

    std::map<std::string, WordFunction> missing;
    CHECK_THROWS_AS(generate_word_machine(n, missing), MachineError);

    Machine not_streams = abstract_adder_machine();
    CHECK_THROWS_AS(generate_word_machine(not_streams, adder_generators()), MachineError);
}

TEST_CASE("stream evaluation through the generated word machine") {
    Machine m_words = generate_word_machine(stream_adder_machine(), adder_generators());
    Stream p = rho_encode(Rational(1, 3));
    Stream q = rho_encode(Rational(1, 6));
    Stream direct = interval_add(p, q);

    // Demand enough symbols to cover 23 complete sum records; widths reach
    // 2^{-20} at record 22.
    IntervalRecordReader counter(direct);
    for (int i = 0; i < 23; ++i) counter.next();
    std::size_t demand = counter.offset();

    std::vector<Stream> inputs{p, q};
    EvalResult r = eval_stream_machine(m_words, inputs, demand, 4096);
    REQUIRE(r.kind == EvalResult::Kind::Value);
    CHECK(prefix_leq(direct.prefix(demand), r.value));

    // The computed word decodes around 1/2 below width 2^{-20}.
    ParsedRecords recs = parse_interval_records(r.value);
    REQUIRE(recs.records.size() >= 23);
    std::optional<Interval> meet;
    for (const Interval& iv : recs.records)
        meet = meet ? intersect(*meet, iv) : std::optional(iv);
    REQUIRE(meet.has_value());
    CHECK(meet->contains(Rational(1, 2)));
    CHECK(meet->width() <= pow2(-20));
}

TEST_CASE("constant word machines evaluate at the first precision") {
    SubroutineRegistry extended = builtin_subroutines();
    WordFunction const11{"const11", 0, WordFunction::Class::Monotone,
                         [](std::span<const Word>) -> std::optional<Word> {
                             return Word::binary("11");
                         }};
    extended.add(to_multi_function(const11));
    Machine m = MachineBuilder("const")
                    .tapes({"word", "word"})
                    .inputs(1)
                    .label("l0")
                    .final_label("lf")
                    .assign("l0", 0, "const11", {}, "lf")
                    .build(extended);
    std::vector<Stream> q{Stream::periodic(Word::binary(""), Word::binary("0"))};
    EvalResult r = eval_stream_machine(m, q, 2, 100);
    REQUIRE(r.kind == EvalResult::Kind::Value);
    CHECK(r.value == Word::binary("11"));
    CHECK(r.at_precision == 1);
}

TEST_CASE("inputs outside the domain exhaust the schedule") {
    Machine m_words = generate_word_machine(stream_adder_machine(), adder_generators());
    // All-zero streams never contain an interval record.
    std::vector<Stream> q{Stream::periodic(Word::binary(""), Word::binary("0")),
                          Stream::periodic(Word::binary(""), Word::binary("0"))};
    EvalResult r = eval_stream_machine(m_words, q, 1, 100);
    CHECK(r.kind == EvalResult::Kind::InsufficientPrecision);
}

TEST_CASE("chain violations during evaluation are errors") {
    SubroutineRegistry extended = builtin_subroutines();
    // Deliberately non-monotone: reports the parity of the input length.
    WordFunction parity{"parity", 1, WordFunction::Class::Monotone,
                        [](std::span<const Word> a) -> std::optional<Word> {
                            return Word::binary(a[0].size() % 2 ? "1" : "0");
                        }};
    extended.add(to_multi_function(parity));
    Machine m = MachineBuilder("parity")
                    .tapes({"word", "word"})
                    .inputs(1)
                    .label("l0")
                    .final_label("lf")
                    .assign("l0", 0, "parity", {1}, "lf")
                    .build(extended);
    std::vector<Stream> q{Stream::periodic(Word::binary(""), Word::binary("0"))};
    CHECK_THROWS_AS(eval_stream_machine(m, q, 4, 100), ClassViolationError);
}

TEST_CASE("direct stream execution agrees with generated evaluation") {
    Machine n = stream_adder_machine();
    Machine m_words = generate_word_machine(n, adder_generators());
    SplitMix64 rng(55);
    for (int i = 0; i < 5; ++i) {
        Rational x = testsupport::random_rational(rng);
        Rational y = testsupport::random_rational(rng);
        std::vector<CarrierValue> stream_inputs{stream_value(rho_encode(x)),
                                                stream_value(rho_encode(y))};
        RunOutcome direct = run(n, stream_inputs);
        REQUIRE(direct.accepted());
        Word direct_prefix = direct.output->as_stream().prefix(64);

        std::vector<Stream> q{rho_encode(x), rho_encode(y)};
        EvalResult r = eval_stream_machine(m_words, q, 64, 4096);
        REQUIRE(r.kind == EvalResult::Kind::Value);
        CHECK(r.value.prefix(64) == direct_prefix);
    }
}

TEST_CASE("configuration prefix order") {
    Machine m = droplast_machine();
    std::vector<CarrierValue> in{word_value(Word::binary("01"))};
    Configuration c = initial_configuration(m, in);
    CHECK(config_prefix(c, c, m.blank));

    Configuration longer = initial_configuration(
        m, std::vector<CarrierValue>{word_value(Word::binary("011"))});
    CHECK(config_prefix(c, longer, m.blank));
    CHECK_FALSE(config_prefix(longer, c, m.blank));

    Configuration other = c;
    other.label = "lf";
    CHECK_FALSE(config_prefix(c, other, m.blank));

    Configuration moved = c;
    moved.tapes[0].head = 2;
    CHECK_FALSE(config_prefix(c, moved, m.blank));
}

TEST_CASE("the precision gauge reads word cells only") {
    Machine m = zipdrop_word_machine();
    std::vector<CarrierValue> in{word_value(Word::binary("0101")),
                                 word_value(Word::binary("110"))};
    Configuration c = initial_configuration(m, in);
    CHECK(precision_gauge(c) == std::optional<std::size_t>(3));

    Configuration coin_config = initial_configuration(coin_machine(), {});
    CHECK_FALSE(precision_gauge(coin_config).has_value());

    // Work symbols do not count.
    c.write_cell(3, 0, Cell('#'), m.blank);
    CHECK(precision_gauge(c) == std::optional<std::size_t>(3));
}

TEST_CASE("runs at increasing precision simulate each other stepwise") {
    Machine m_words = generate_word_machine(stream_adder_machine(), adder_generators());
    Stream p = rho_encode(Rational(1, 3));
    Stream q = rho_encode(Rational(1, 6));
    for (std::size_t e = 60; e <= 63; ++e) {
        std::vector<CarrierValue> at_e{word_value(p.prefix(e)), word_value(q.prefix(e))};
        std::vector<CarrierValue> at_e1{word_value(p.prefix(e + 1)), word_value(q.prefix(e + 1))};
        auto snaps_e = run_snapshots(m_words, at_e, 64);
        auto snaps_e1 = run_snapshots(m_words, at_e1, 64);
        REQUIRE(snaps_e.size() <= snaps_e1.size());
        for (std::size_t i = 0; i < snaps_e.size(); ++i)
            CHECK(config_prefix(snaps_e[i], snaps_e1[i], m_words.blank));
        // The gauge never drops below the input precision here.
        auto gauge = precision_gauge(snaps_e.front());
        REQUIRE(gauge.has_value());
        CHECK(*gauge == e);
    }
}

TEST_CASE("realization is downwards transitive across the interval stack") {
    // h: stream-level adder realizes g: sequence-level adder realizes
    // f: rational addition. Layer checks and the composed check all verify.
    MultiRepresentation gamma = sri_encoding_representation();
    MultiRepresentation delta = interval_representation();
    MultiRepresentation composed = compose_rel(delta, gamma);

    SplitMix64 rng(91);
    std::vector<std::vector<CarrierValue>> sri_samples;
    std::vector<std::vector<CarrierValue>> real_samples;
    for (int i = 0; i < 8; ++i) {
        Rational x = testsupport::random_rational(rng);
        Rational y = testsupport::random_rational(rng);
        real_samples.push_back({real_value(x), real_value(y)});
        sri_samples.push_back({delta.encode(real_value(x)), delta.encode(real_value(y))});
    }

    std::vector<MultiRepresentation> gamma2{gamma, gamma};
    auto layer1 = check_realization(multi("ivadd"), multi("sri_add"), gamma2, gamma, sri_samples, 30);
    for (const SampleReport& r : layer1) CHECK(r.verdict == SampleVerdict::Verified);

    std::vector<MultiRepresentation> delta2{delta, delta};
    auto layer2 =
        check_realization(multi("sri_add"), multi("real_add"), delta2, delta, real_samples, 30);
    for (const SampleReport& r : layer2) CHECK(r.verdict == SampleVerdict::Verified);

    std::vector<MultiRepresentation> composed2{composed, composed};
    auto both =
        check_realization(multi("ivadd"), multi("real_add"), composed2, composed, real_samples, 30);
    for (const SampleReport& r : both) CHECK(r.verdict == SampleVerdict::Verified);
}
