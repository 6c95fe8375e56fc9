#ifndef REVQ_STDLIB_HPP
#define REVQ_STDLIB_HPP

#include <optional>
#include <string>
#include <vector>

#include "revq/ast.hpp"
#include "revq/parser.hpp"

namespace revq::lib {

// ---------------------------------------------------------------------------
// Reversible Turing machines

struct RTMSpec {
  struct Rule {
    enum class Kind { Write, MoveL, MoveR, Stay };
    int from = 0;
    Kind kind = Kind::Stay;
    int read = 0, write = 0;  // Write only
    int to = 0;
  };
  int num_states = 0;
  int num_symbols = 0;  // symbol 0 is the blank
  int start = 0, fin = 0;
  std::vector<Rule> rules;
  std::string name = "machine";

  // forward/backward determinism, no transition out of fin nor into start
  void validate() const;
  RTMSpec inverted() const;
};

// Direct configuration-level simulation on standard configurations; the
// oracle the iso encoding is tested against. Input/output strings are
// sequences of non-blank symbol indices. nullopt when the machine does not
// halt within max_steps or halts off a standard configuration.
std::optional<std::vector<int>> rtm_string_semantics(const RTMSpec& m,
                                                     const std::vector<int>& input,
                                                     long max_steps);

// Hand-built unary increment machine: 1^n becomes 1^(n+1). Two working
// states plus the final state (a transition cannot both write and move).
RTMSpec unary_increment();

// Encoding helpers shared by generators and tests.
TypePtr state_type(const RTMSpec& m);
TypePtr symbol_type(const RTMSpec& m);
TypePtr conf_type(const RTMSpec& m);
TermPtr encode_state(const RTMSpec& m, int q);
TermPtr encode_symbol(const RTMSpec& m, int s);
// clean standard configuration: empty left tape, blank cursor, given string
TermPtr encode_standard(const RTMSpec& m, int q, const std::vector<int>& s);
// reads the configuration part of a runner output (conf, garbage); expects
// the final state, cleaned tapes and a blank cursor
std::optional<std::vector<int>> decode_standard(const RTMSpec& m, const TermPtr& out);

// ---------------------------------------------------------------------------
// Program generators. Each returns a complete source program in concrete
// syntax; the iso of interest carries the stated name.

std::string hadamard_source();              // iso had : I+I <-> I+I
std::string swap_source();                  // iso swap (variable clauses)
std::string not_source();                   // iso notq (closed clauses)
std::string map_source(const TypePtr& a, const TypePtr& b);  // iso map + iso succ demo
std::string dup_source(const TypePtr& a);   // iso dup : A <-> A*A
std::string erase_source(const TypePtr& a, const TypePtr& t, const TermPtr& v);
std::string cantor_source();                // iso cantor : nat*nat <-> nat
std::string floor_source(const TypePtr& a); // iso floor : A <-> [Enc]
std::string growth_source(int num_symbols); // iso growth over the symbol alphabet
std::string it_source(const TypePtr& a);    // iso it : (A<->A*(I+I)) -> (A<->A*nat)
std::string rmblank_source(int num_symbols);
std::string rev_source(const TypePtr& a);   // iso rev : [A] <-> [A]*[A]
std::string cleanup_source(const RTMSpec& m);
std::string rtm_iso_source(const RTMSpec& m);    // iso machine : Conf <-> Conf
std::string rtm_isob_source(const RTMSpec& m);   // iso machineb : Conf <-> Conf*(I+I)
// full runner: iso run : Conf <-> Conf * garbage (seed; iterate; clean up)
std::string rtm_runner_source(const RTMSpec& m);
// Bennett-cleaned machine: iso garrem : Conf <-> Conf with no residual garbage
std::string rtm_garrem_source(const RTMSpec& m);

// Enc type of the canonical flat representation.
TypePtr enc_type();

// Generator registry for the CLI: `gen ID [ARGS]`.
std::vector<std::string> program_ids();
std::string generate_source(const std::string& id, const std::vector<std::string>& args);
SourceProgram generate(const std::string& id, const std::vector<std::string>& args = {});

}  // namespace revq::lib

#endif
