#pragma once

#include "msca/decision.hpp"
#include "msca/program.hpp"

namespace msca {

// Convex inner problem around an expansion point. Program variables start with the
// layout's free entries; backlog variables of the prefix constraints follow.
struct InnerProblem {
  ConvexProgram program;
  VariableLayout layout;
};

// Builds the surrogate problem for any plan. The expansion must already satisfy the
// endpoint constraints; fixed blocks (per `mask`) enter as constants.
InnerProblem assemble_inner(const MissionSpec& mission, const ScenarioPlan& plan, const DecisionVector& expansion,
                            const SurrogateParams& params, const SchemeMask& mask = {}, const Units& units = {});

// Scenario-checked entry points; throw std::invalid_argument on a plan of another kind.
InnerProblem assemble_always_on(const MissionSpec& mission, const ScenarioPlan& plan,
                                const DecisionVector& expansion, const SurrogateParams& params,
                                const SchemeMask& mask = {}, const Units& units = {});
InnerProblem assemble_always_off(const MissionSpec& mission, const ScenarioPlan& plan,
                                 const DecisionVector& expansion, const SurrogateParams& params,
                                 const SchemeMask& mask = {}, const Units& units = {});
// Also requires 0 < N_t < N.
InnerProblem assemble_intermediate(const MissionSpec& mission, const ScenarioPlan& plan,
                                   const DecisionVector& expansion, const SurrogateParams& params,
                                   const SchemeMask& mask = {}, const Units& units = {});

}  // namespace msca
