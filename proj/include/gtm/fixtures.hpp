#pragma once

#include <map>
#include <string>
#include <vector>

#include "gtm/builtins.hpp"
#include "gtm/machine.hpp"
#include "gtm/realize.hpp"
#include "gtm/represent.hpp"

namespace gtm {

// The standard example machines. They double as CLI demos and as test
// fixtures; each is small enough to read at a glance.

// 0-ary coin flip: writes "0" or "1" to the output tape.
inline Machine coin_machine() {
    return MachineBuilder("coin")
        .tapes({"word"})
        .inputs(0)
        .label("l0")
        .final_label("lf")
        .assign("l0", 0, "coin", {}, "lf")
        .build(builtin_subroutines());
}

inline Machine copy_word_machine() {
    return MachineBuilder("copy")
        .tapes({"word", "word"})
        .inputs(1)
        .label("l0")
        .final_label("lf")
        .assign("l0", 0, "w_id", {1}, "lf")
        .build(builtin_subroutines());
}

// f_M(u) = u without its last symbol.
inline Machine droplast_machine() {
    return MachineBuilder("droplast")
        .tapes({"word", "word"})
        .inputs(1)
        .label("l0")
        .final_label("lf")
        .assign("l0", 0, "w_droplast", {1}, "lf")
        .build(builtin_subroutines());
}

// Monotone-constant test steering two monotone assignments:
// f_M(u) = u if u starts with 0, droplast(u) if u starts with 1, undefined on "".
inline Machine branchy_word_machine() {
    return MachineBuilder("branchy")
        .tapes({"word", "word"})
        .inputs(1)
        .label("l0")
        .label("la")
        .label("lb")
        .final_label("lf")
        .branch_fn("l0", "w_first_is0", {1}, "la", "lb")
        .assign("la", 0, "w_id", {1}, "lf")
        .assign("lb", 0, "w_droplast", {1}, "lf")
        .build(builtin_subroutines());
}

// Exercises work-symbol writes, head moves and symbol branches around two
// monotone assignments: f_M(u, v) = droplast(zip(u, v)).
inline Machine zipdrop_word_machine() {
    return MachineBuilder("zipdrop")
        .tapes({"word", "word", "word", "word"})
        .inputs(2)
        .work("_#", '_')
        .label("l0")
        .label("l1")
        .label("l2")
        .label("l3")
        .label("l4")
        .label("l5")
        .label("ldead")
        .final_label("lf")
        .write("l0", 3, '#', "l1")
        .branch_sym("l1", 3, '#', "l2", "ldead")
        .assign("l2", 0, "w_zip", {1, 2}, "l3")
        .move_right("l3", 3, "l4")
        .branch_sym("l4", 3, '#', "ldead", "l5")
        .assign("l5", 0, "w_droplast", {0}, "lf")
        .move_right("ldead", 3, "ldead")
        .build(builtin_subroutines());
}

// The three word machines with monotone assignments and monotone-constant
// tests used by the machine-level monotonicity property.
inline std::vector<Machine> monotone_word_machines() {
    return {droplast_machine(), branchy_word_machine(), zipdrop_word_machine()};
}

// Componentwise interval addition as a stream machine (one assignment).
inline Machine stream_adder_machine() {
    return MachineBuilder("adder")
        .tapes({"stream", "stream", "stream"})
        .inputs(2)
        .label("l0")
        .final_label("lf")
        .assign("l0", 0, "ivadd", {1, 2}, "lf")
        .build(builtin_subroutines());
}

// Addition on the reals as an abstract machine (reals sampled at rationals).
inline Machine abstract_adder_machine() {
    return MachineBuilder("radd")
        .tapes({"real", "real", "real"})
        .inputs(2)
        .label("l0")
        .final_label("lf")
        .assign("l0", 0, "real_add", {1, 2}, "lf")
        .build(builtin_subroutines());
}

// Addition at the intermediate abstraction level: interval sequences.
inline Machine sri_adder_machine() {
    return MachineBuilder("sriadd")
        .tapes({"sri", "sri", "sri"})
        .inputs(2)
        .label("l0")
        .final_label("lf")
        .assign("l0", 0, "sri_add", {1, 2}, "lf")
        .build(builtin_subroutines());
}

// Realizes the abstract real adder by the interval-stream adder: every tape
// is read through the real-number representation.
inline RealizerTable adder_realizer_table() {
    const SubroutineRegistry reg = builtin_subroutines();
    RealizerTable rt;
    rt.realizers.emplace("real_add", *reg.find("ivadd"));
    MultiRepresentation rho = rho_representation();
    rt.tape_reps = {rho, rho, rho};
    return rt;
}

// The same lowering split across the intermediate level: reals named by
// interval sequences, interval sequences named by record streams.
inline RealizerTable real_to_sri_realizer_table() {
    const SubroutineRegistry reg = builtin_subroutines();
    RealizerTable rt;
    rt.realizers.emplace("real_add", *reg.find("sri_add"));
    MultiRepresentation rep = interval_representation();
    rt.tape_reps = {rep, rep, rep};
    return rt;
}

inline RealizerTable sri_to_stream_realizer_table() {
    const SubroutineRegistry reg = builtin_subroutines();
    RealizerTable rt;
    rt.realizers.emplace("sri_add", *reg.find("ivadd"));
    MultiRepresentation rep = sri_encoding_representation();
    rt.tape_reps = {rep, rep, rep};
    return rt;
}

// Generators for the stream adder (for the word-machine generation path).
inline std::map<std::string, WordFunction> adder_generators() {
    std::map<std::string, WordFunction> g;
    g.emplace("ivadd", wf_ivadd("ivadd"));
    return g;
}

// ---- oracle-splitting fixtures ------------------------------------------------
// Machines over streams that apply one oracle subroutine (s_not here) at most
// once per control path.

// Apply the oracle and halt.
inline Machine oracle_apply_machine() {
    return MachineBuilder("wapply")
        .tapes({"stream", "stream"})
        .inputs(1)
        .label("l0")
        .final_label("lf")
        .assign("l0", 0, "s_not", {1}, "lf")
        .build(builtin_subroutines());
}

// Pre- and post-processing around a single oracle call:
// f_M(p) = interleave(not(tail p), p).
inline Machine oracle_pipeline_machine() {
    return MachineBuilder("wpipeline")
        .tapes({"stream", "stream", "stream"})
        .inputs(1)
        .label("l0")
        .label("l1")
        .label("l2")
        .final_label("lf")
        .assign("l0", 2, "s_tail", {1}, "l1")
        .assign("l1", 2, "s_not", {2}, "l2")
        .assign("l2", 0, "s_interleave", {2, 1}, "lf")
        .build(builtin_subroutines());
}

// The oracle sits on one branch only; inputs starting with 1 never reach it.
inline Machine oracle_branch_machine() {
    return MachineBuilder("wbranch")
        .tapes({"stream", "stream"})
        .inputs(1)
        .label("l0")
        .label("l1")
        .label("l2")
        .final_label("lf")
        .branch_fn("l0", "s_first_is0", {1}, "l1", "l2")
        .assign("l1", 0, "s_not", {1}, "lf")
        .assign("l2", 0, "s_dup", {1}, "lf")
        .build(builtin_subroutines());
}

inline std::vector<Machine> oracle_fixture_machines() {
    return {oracle_apply_machine(), oracle_pipeline_machine(), oracle_branch_machine()};
}

} // namespace gtm
