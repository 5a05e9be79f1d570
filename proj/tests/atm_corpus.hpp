#pragma once

// Machine corpus shared between the unit and acceptance suites.

#include "afkit/atm.hpp"

namespace corpus {

using namespace afkit;

// accepts immediately: the initial state is the accepting one
inline AtmSpec machine_instant_accept() {
    AtmSpec m;
    m.states = {{"acc", StateKind::Accept}, {"rej", StateKind::Reject}};
    m.alphabet = {"a", "b"};
    m.initial = "acc";
    m.space_exponent = 1;
    return m;
}

inline AtmSpec machine_instant_reject() {
    auto m = machine_instant_accept();
    m.initial = "rej";
    return m;
}

// writes the flipped bit, steps right, returns left and accepts
inline AtmSpec machine_bit_flip() {
    AtmSpec m;
    m.states = {{"flip", StateKind::Existential},
                {"back", StateKind::Existential},
                {"acc", StateKind::Accept},
                {"rej", StateKind::Reject}};
    m.alphabet = {"a", "b"};
    m.initial = "flip";
    m.space_exponent = 1;
    m.transitions = {
        {"flip", "a", "back", "b", 1},
        {"flip", "b", "back", "a", 1},
        {"flip", "_", "back", "_", 1},
        {"back", "a", "acc", "a", -1},
        {"back", "b", "acc", "b", -1},
        {"back", "_", "acc", "_", -1},
    };
    return m;
}

// universal branching: both branches accept
inline AtmSpec machine_universal() {
    AtmSpec m;
    m.states = {{"start", StateKind::Universal},
                {"acc", StateKind::Accept},
                {"rej", StateKind::Reject}};
    m.alphabet = {"a", "b"};
    m.initial = "start";
    m.space_exponent = 1;
    m.transitions = {
        {"start", "a", "acc", "a", 0},
        {"start", "a", "acc", "b", 0},
        {"start", "b", "acc", "b", 0},
        {"start", "b", "acc", "a", 0},
        {"start", "_", "acc", "_", 0},
        {"start", "_", "acc", "a", 0},
    };
    return m;
}

// existential choice where the first transition leads to rejection
inline AtmSpec machine_choice() {
    AtmSpec m;
    m.states = {{"start", StateKind::Existential},
                {"acc", StateKind::Accept},
                {"rej", StateKind::Reject}};
    m.alphabet = {"a", "b"};
    m.initial = "start";
    m.space_exponent = 1;
    m.transitions = {
        {"start", "a", "rej", "a", 0},
        {"start", "a", "acc", "a", 0},
        {"start", "b", "rej", "b", 0},
        {"start", "b", "acc", "b", 0},
        {"start", "_", "rej", "_", 0},
        {"start", "_", "acc", "_", 0},
    };
    return m;
}

inline std::vector<std::pair<AtmSpec, std::string>> accepting_corpus() {
    return {{machine_instant_accept(), "a"},
            {machine_bit_flip(), "a"},
            {machine_bit_flip(), "b"},
            {machine_universal(), "a"},
            {machine_choice(), "a"}};
}

}  // namespace corpus
