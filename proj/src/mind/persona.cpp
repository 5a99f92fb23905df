#include "dlp/mind/persona.hpp"

#include <algorithm>
#include <fstream>

namespace dlp {

std::string render_persona_instruction(const std::string& extend,
                                       const std::string& trait_dimension,
                                       const std::string& behavior) {
    return "A person with " + extend + " " + trait_dimension + " tends to behave/think: " +
           behavior;
}

PersonaDb PersonaDb::from_rows(const std::vector<PersonaRow>& rows,
                               const EmbedderPort& embedder) {
    PersonaDb db;
    for (const auto& row : rows) {
        if (row.key != 1 && row.key != -1) {
            throw MalformedRow("persona row key must be +1 or -1 (" + row.label + ")");
        }
        if (row.text.empty() || row.label.empty()) {
            throw MalformedRow("persona row needs item text and a label");
        }
        PersonaInstruction inst;
        inst.trait_dimension = row.label;
        inst.extend = row.key == 1 ? "high" : "low";
        inst.behavior = row.text;
        inst.rendered = render_persona_instruction(inst.extend, inst.trait_dimension,
                                                   inst.behavior);
        inst.embedding = embedder.embed(inst.rendered);
        db.items_.push_back(std::move(inst));
    }
    return db;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            row.push_back(std::move(field));
            field.clear();
        } else if (c == '\n') {
            row.push_back(std::move(field));
            field.clear();
            rows.push_back(std::move(row));
            row.clear();
        } else if (c != '\r') {
            field += c;
        }
    }
    if (!field.empty() || !row.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
    }
    return rows;
}

PersonaDb PersonaDb::from_csv_text(const std::string& csv, const EmbedderPort& embedder) {
    const auto rows = parse_csv(csv);
    std::vector<PersonaRow> parsed;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (r.empty() || (r.size() == 1 && r[0].empty())) continue;
        if (i == 0 && r.size() >= 1 && r[0] == "instrument") continue;  // header
        if (r.size() < 5) throw MalformedRow("persona csv row needs 5 columns");
        PersonaRow row;
        row.instrument = r[0];
        try {
            row.alpha = std::stod(r[1]);
            row.key = std::stoi(r[2]);
        } catch (const std::exception&) {
            throw MalformedRow("persona csv row has non-numeric alpha/key");
        }
        row.text = r[3];
        row.label = r[4];
        parsed.push_back(std::move(row));
    }
    return from_rows(parsed, embedder);
}

PersonaDb PersonaDb::load_csv(const std::string& path, const EmbedderPort& embedder) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open persona csv: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_csv_text(text, embedder);
}

std::vector<std::size_t> PersonaDb::retrieve(const TextEmbedding& query, std::size_t n) const {
    if (items_.empty()) throw EmptyInstructionDb("persona db is empty");
    struct Scored {
        std::size_t index;
        double score;
    };
    std::vector<Scored> scored(items_.size());
    for (std::size_t i = 0; i < items_.size(); ++i) {
        scored[i] = {i, cosine(query, items_[i].embedding)};
    }
    std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.index < b.index;
    });
    if (scored.size() > n) scored.resize(n);
    std::vector<std::size_t> out;
    for (const auto& s : scored) out.push_back(s.index);
    return out;
}

std::vector<std::size_t> PersonaDb::retrieve_for(const std::string& context_text,
                                                 const PsychState& state, std::size_t n,
                                                 const EmbedderPort& embedder) const {
    return retrieve(embedder.embed(context_text + "\n" + state.render()), n);
}

}  // namespace dlp
