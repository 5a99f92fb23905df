#pragma once

#include <string>
#include <vector>

#include "dlp/embed/embedder.hpp"
#include "dlp/mind/psych.hpp"

namespace dlp {

struct MalformedRow : Error {
    using Error::Error;
};
struct EmptyInstructionDb : Error {
    using Error::Error;
};

// One inventory item row: (instrument, alpha, key, text, label) with
// key +1 for positively keyed items and -1 for negatively keyed ones.
struct PersonaRow {
    std::string instrument;
    double alpha = 0.0;
    int key = 0;
    std::string text;
    std::string label;
};

struct PersonaInstruction {
    std::string trait_dimension;
    std::string extend;  // "high" or "low"
    std::string behavior;
    std::string rendered;
    TextEmbedding embedding;
};

std::string render_persona_instruction(const std::string& extend,
                                       const std::string& trait_dimension,
                                       const std::string& behavior);

class PersonaDb {
public:
    // key = +1 -> "high", key = -1 -> "low"; anything else is MalformedRow.
    static PersonaDb from_rows(const std::vector<PersonaRow>& rows, const EmbedderPort& embedder);
    static PersonaDb from_csv_text(const std::string& csv, const EmbedderPort& embedder);
    static PersonaDb load_csv(const std::string& path, const EmbedderPort& embedder);

    const std::vector<PersonaInstruction>& instructions() const { return items_; }
    std::size_t size() const { return items_.size(); }

    // Top-n instruction indices by cosine against the query embedding;
    // ties by instruction index. Throws EmptyInstructionDb.
    std::vector<std::size_t> retrieve(const TextEmbedding& query, std::size_t n) const;

    // Query text = context ++ rendered psych state.
    std::vector<std::size_t> retrieve_for(const std::string& context_text,
                                          const PsychState& state, std::size_t n,
                                          const EmbedderPort& embedder) const;

private:
    std::vector<PersonaInstruction> items_;
};

// Minimal CSV with quoted-field support; used by the persona db loader.
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

}  // namespace dlp
