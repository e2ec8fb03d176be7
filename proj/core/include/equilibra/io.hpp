#pragma once

#include "equilibra/game.hpp"
#include "equilibra/memory.hpp"

#include <json.hpp>

#include <string>

namespace eq {

using json = nlohmann::ordered_json;

Game game_from_json(const json& j);
json game_to_json(const Game& g);
Game parse_game(const std::string& text);
std::string serialize_game(const Game& g);
Game load_game(const std::string& path);

Memory memory_from_json(const Game& g, const json& j);
json memory_to_json(const Game& g, const Memory& m);
Memory load_memory(const Game& g, const std::string& path);

using Requirement = std::vector<ExtRat>;
json requirement_to_json(const Game& g, const Requirement& r);
Requirement requirement_from_json(const Game& g, const json& j);

std::string read_file(const std::string& path);

}
