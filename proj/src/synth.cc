/*
 * Copyright 2026 The Herald Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#include "herald/synth.h"

#include <algorithm>
#include <cstdio>
#include <map>

#include "herald/error.h"
#include "herald/rng.h"

namespace herald {
namespace {

using Pool = std::vector<std::string_view>;

const std::map<std::string_view, Pool>& Slots() {
  static const auto* slots = new std::map<std::string_view, Pool>{
      {"topic",
       {"movies", "music", "sports", "books", "video games", "cooking",
        "travel", "art", "science", "fashion", "history", "cars", "dancing",
        "photography", "hiking", "gardening", "podcasts", "television",
        "space", "politics", "comics", "anime", "poetry", "chess"}},
      {"movie",
       {"frozen two", "star wars", "the lion king", "toy story", "inception",
        "the avengers", "jurassic park", "finding nemo", "titanic",
        "black panther", "the matrix", "coco", "shrek", "up", "moana",
        "interstellar"}},
      {"food",
       {"pizza", "sushi", "tacos", "pasta", "ice cream", "burgers", "ramen",
        "pancakes", "curry", "dumplings", "salad", "steak", "waffles",
        "noodles"}},
      {"place",
       {"paris", "japan", "new york", "italy", "hawaii", "london", "mexico",
        "canada", "brazil", "spain", "egypt", "iceland", "chicago",
        "australia"}},
      {"relative",
       {"sister", "brother", "mom", "dad", "friend", "cousin", "roommate",
        "grandma", "uncle", "neighbor"}},
      {"good",
       {"amazing", "great", "awesome", "fantastic", "wonderful", "really fun",
        "so cool", "underrated", "beautiful", "hilarious"}},
      {"animal",
       {"dogs", "cats", "horses", "dolphins", "penguins", "parrots", "rabbits",
        "turtles", "owls", "foxes"}},
      {"activity",
       {"swimming", "running", "painting", "reading", "camping", "baking",
        "skiing", "biking", "fishing", "knitting", "surfing", "climbing"}},
      {"time", {"week", "weekend", "month", "night", "summer", "year"}},
      {"sport",
       {"soccer", "basketball", "tennis", "baseball", "hockey", "golf",
        "volleyball", "football"}},
      {"instrument",
       {"guitar", "piano", "drums", "violin", "flute", "ukulele"}},
  };
  return *slots;
}

constexpr std::string_view kSystem[] = {
    "what do you think about {topic}?",
    "have you seen {movie}?",
    "do you like {food}?",
    "have you ever been to {place}?",
    "what did you do last {time}?",
    "i love talking about {topic}. what about you?",
    "did you know that {animal} can be very smart?",
    "what is your favorite part of {movie}?",
    "do you enjoy {activity}?",
    "tell me about your {relative}.",
    "i heard {place} is beautiful this time of year.",
    "what kind of {topic} do you like?",
    "do you play any sports, like {sport}?",
    "can you play the {instrument}?",
    "what should we chat about next?",
    "i recently learned a fun fact about {animal}.",
};

constexpr std::string_view kEngaged[] = {
    "i love {topic}.",
    "i really like {topic}, especially on weekends.",
    "my favorite movie is {movie}.",
    "have you seen {movie}? it is {good}.",
    "i watched {movie} last {time} with my {relative}.",
    "what is your favorite kind of {food}?",
    "i went to {place} last {time} and it was {good}.",
    "my {relative} and i love {activity}.",
    "i think {movie} is {good}.",
    "yes! i love {food}. do you like it too?",
    "that sounds {good}! tell me more about it.",
    "i have two {animal} at home.",
    "i usually go {activity} with my {relative}.",
    "oh cool, i have always wanted to visit {place}.",
    "i read a book about {topic} last {time}.",
    "sure, i would love to hear about {topic}!",
    "honestly {food} is the best food ever.",
    "do you know any fun facts about {animal}?",
    "i am learning a lot about {topic} right now.",
    "no, i haven't. is it good?",
    "not yet, but i want to see {movie} soon.",
    "we had {food} for dinner last {time}.",
    "i would love to visit {place} someday.",
    "my {relative} recommended {movie} to me.",
    "tell me something interesting about {place}.",
    "yes. i went to {place} with my {relative}.",
    "my {relative} cooks the best {food}.",
    "i spend most weekends {activity}.",
    "i play {sport} every {time} with my friends.",
    "i have been learning the {instrument} since last {time}.",
    "my {relative} is a huge fan of {sport}.",
    "what was your favorite scene in {movie}?",
    "i saw some {animal} when i was in {place}.",
    "the food in {place} was {good}, especially the {food}.",
    "i want to get better at {activity} this {time}.",
    "who is your favorite character in {movie}?",
    "my {relative} taught me how to play the {instrument}.",
    "{sport} is my favorite sport to watch.",
    "i think {animal} are {good} animals.",
    "we watched {movie} together and laughed the whole time.",
    "do you think {topic} will change a lot in the future?",
    "i made {food} from scratch last {time}.",
    "my {relative} lives in {place} now.",
    "that is so interesting, i never knew that about {animal}!",
    "i started a club for {topic} at my school.",
    "my dream is to travel to {place} and try the {food}.",
    "i listen to podcasts about {topic} while {activity}.",
    "yes, i have seen it twice with my {relative}!",
    "which {sport} team do you root for?",
    "the ending of {movie} surprised me.",
};

constexpr std::string_view kHardNegative[] = {
    "i disagree, i think {movie} was {good}!",
    "i don't like {food}, but i love {topic}.",
    "ugh, i can't wait for the new {movie} movie!",
    "i hate how short {movie} was, i wanted more!",
    "sigh, {movie} always makes me cry. it is {good}.",
    "i don't care what anyone says, {movie} is {good}.",
    "i never liked {sport} until my {relative} took me to a game, now i love it.",
    "geez, {place} was even more {good} than i expected!",
};

constexpr std::string_view kGroup1[] = {
    "you already asked me that.",
    "you just said that about {topic}.",
    "you keep asking the same thing.",
    "you're not listening to me.",
    "you didn't answer my question.",
    "i never said i liked {topic}.",
    "what are you talking about?",
    "that doesn't make any sense.",
    "you are so dumb.",
    "stupid bot.",
    "ugh, this is so frustrating.",
    "you already asked me about {movie}.",
    "i already told you i don't have {animal}.",
    "you're repeating yourself again.",
    "that's not what i said about {food}.",
    "what do you mean by that?",
    "you are so annoying.",
    "shut up about {topic}.",
};

constexpr std::string_view kGroup2[] = {
    "i don't like {topic}.",
    "{topic} is boring.",
    "i hate {topic}.",
    "i'm not interested in {topic}.",
    "i don't really care about {topic}.",
    "not a big fan of {topic}.",
    "who cares about {movie}?",
    "{movie} was so boring.",
    "i can't stand {sport}.",
    "i never enjoyed {activity}.",
    "{food} is kind of lame.",
    "that sounds pretty dull.",
    "not really my thing.",
    "i dislike {animal}.",
};

constexpr std::string_view kGroup3[] = {
    "let's talk about something else.",
    "can we change the topic?",
    "i don't want to talk about {topic}.",
    "i have to go now.",
    "bye.",
    "stop.",
    "goodbye, my {relative} is calling me.",
    "enough about this.",
    "i want to talk about a different topic.",
    "let's switch the subject.",
    "i need to go, talk to you later.",
    "can we chat about anything else?",
    "please stop the conversation.",
    "i don't wanna talk about {movie}.",
};

constexpr std::string_view kGroup4[] = {
    "no.",
    "nope.",
    "not really.",
    "no, i haven't.",
    "i don't know.",
    "not sure.",
    "maybe.",
    "i guess.",
    "ok.",
    "yeah.",
    "sure.",
    "hmm.",
    "um.",
    "let me think.",
    "that is a tough question.",
    "i heard of {movie}. not really.",
    "i have no idea.",
    "i can't remember.",
    "nah.",
    "probably.",
    "i see.",
    "{place}? no.",
};

constexpr std::string_view kParaphrase[] = {
    "can we discuss a different thing?",
    "whatever.",
    "meh.",
    "this conversation is pointless.",
    "you sound like a broken record.",
    "are you even paying attention to me?",
    "i'd rather not discuss {topic}.",
    "{topic} puts me to sleep.",
    "i couldn't care less about {topic}.",
    "please move on to another subject.",
    "i'm done with this chat.",
    "no comment.",
    "nothing really.",
    "you make no sense at all.",
    "i'm bored.",
    "gotta run, later.",
};

// Replaces every {slot} with a value drawn from `rng`.
std::string Fill(std::string_view text, Rng& rng) {
  std::string out;
  std::size_t i = 0;
  while (i < text.size()) {
    const auto open = text.find('{', i);
    if (open == std::string_view::npos) {
      out.append(text.substr(i));
      break;
    }
    const auto close = text.find('}', open);
    out.append(text.substr(i, open - i));
    const Pool& values = Slots().at(text.substr(open + 1, close - open - 1));
    out.append(values[rng.Below(values.size())]);
    i = close + 1;
  }
  return out;
}

std::string StripPunctuation(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (c == '.' || c == ',' || c == '?' || c == '!') continue;
    out.push_back(c);
  }
  return out;
}

template <std::size_t N>
std::string_view Draw(const std::string_view (&pool)[N], Rng& rng) {
  return pool[rng.Below(N)];
}

void CheckRate(double rate, std::string_view name) {
  if (!(rate >= 0.0 && rate <= 1.0)) {
    throw InvalidArgument(std::string(name) + " must be in [0, 1]");
  }
}

}  // namespace

std::string_view ToString(SynthCategory category) {
  switch (category) {
    case SynthCategory::kEngaged:
      return "engaged";
    case SynthCategory::kHardNegative:
      return "hard_negative";
    case SynthCategory::kCovered:
      return "covered";
    case SynthCategory::kParaphrase:
      return "paraphrase";
  }
  return "engaged";
}

std::vector<TemplatePool> TemplatePools() {
  return {
      {SynthCategory::kEngaged, 0, kEngaged},
      {SynthCategory::kHardNegative, 0, kHardNegative},
      {SynthCategory::kCovered, 1, kGroup1},
      {SynthCategory::kCovered, 2, kGroup2},
      {SynthCategory::kCovered, 3, kGroup3},
      {SynthCategory::kCovered, 4, kGroup4},
      {SynthCategory::kParaphrase, 0, kParaphrase},
  };
}

std::vector<std::string> ExpandTemplate(std::string_view text) {
  const auto open = text.find('{');
  if (open == std::string_view::npos) return {std::string(text)};
  const auto close = text.find('}', open);
  const Pool& values = Slots().at(text.substr(open + 1, close - open - 1));
  std::vector<std::string> out;
  for (std::string_view value : values) {
    const std::string head = std::string(text.substr(0, open)) + std::string(value);
    for (const std::string& tail : ExpandTemplate(text.substr(close + 1))) {
      out.push_back(head + tail);
    }
  }
  return out;
}

std::optional<Label> NoisyLabel(const Turn& turn) {
  auto it = turn.extra.find("noisy_label");
  if (it == turn.extra.end() || !it->is_number_integer()) return std::nullopt;
  return LabelFromInt(it->get<std::int64_t>());
}

Corpus SynthCorpus(const SynthConfig& config) {
  if (config.n_dialogs < 1 || config.turns_per_dialog < 1) {
    throw InvalidArgument("synthetic corpus needs at least one dialog and turn");
  }
  CheckRate(config.disengaged_rate, "disengaged_rate");
  CheckRate(config.noise_rate, "noise_rate");
  CheckRate(config.paraphrase_rate, "paraphrase_rate");
  CheckRate(config.hard_negative_rate, "hard_negative_rate");
  double weight_total = 0.0;
  for (double w : config.group_weights) {
    if (!(w >= 0.0)) throw InvalidArgument("group weights must be non-negative");
    weight_total += w;
  }
  if (!(weight_total > 0.0)) throw InvalidArgument("group weights sum to zero");

  Rng rng(config.seed);
  Corpus corpus;
  corpus.role = config.role;
  for (int d = 0; d < config.n_dialogs; ++d) {
    Dialog dialog;
    char id[32];
    std::snprintf(id, sizeof(id), "-%05d", d);
    dialog.dialog_id = config.id_prefix + id;
    dialog.source_mode = config.source_mode;
    for (int t = 0; t < config.turns_per_dialog; ++t) {
      Turn turn;
      turn.index = t;
      turn.system_utterance = Fill(Draw(kSystem, rng), rng);

      const bool disengaged = rng.Bernoulli(config.disengaged_rate);
      SynthCategory category;
      int group = 0;
      std::string_view text;
      if (disengaged) {
        if (rng.Bernoulli(config.paraphrase_rate)) {
          category = SynthCategory::kParaphrase;
          text = Draw(kParaphrase, rng);
        } else {
          category = SynthCategory::kCovered;
          double u = rng.Uniform() * weight_total;
          group = 4;
          for (int g = 0; g < 4; ++g) {
            if (u < config.group_weights[g]) {
              group = g + 1;
              break;
            }
            u -= config.group_weights[g];
          }
          switch (group) {
            case 1: text = Draw(kGroup1, rng); break;
            case 2: text = Draw(kGroup2, rng); break;
            case 3: text = Draw(kGroup3, rng); break;
            default: text = Draw(kGroup4, rng); break;
          }
        }
      } else if (rng.Bernoulli(config.hard_negative_rate)) {
        category = SynthCategory::kHardNegative;
        text = Draw(kHardNegative, rng);
      } else {
        category = SynthCategory::kEngaged;
        text = Draw(kEngaged, rng);
      }
      turn.user_utterance = Fill(text, rng);
      if (config.source_mode == SourceMode::kAsr) {
        turn.user_utterance = StripPunctuation(turn.user_utterance);
      }
      const Label gold = disengaged ? Label::kDisengaged : Label::kEngaged;
      turn.gold_label = gold;
      const Label noisy = rng.Bernoulli(config.noise_rate) ? Flip(gold) : gold;
      turn.extra["noisy_label"] = ToInt(noisy);
      std::string tag(ToString(category));
      if (category == SynthCategory::kCovered) tag += "_g" + std::to_string(group);
      turn.extra["synth_category"] = tag;
      dialog.turns.push_back(std::move(turn));
    }
    corpus.dialogs.push_back(std::move(dialog));
  }
  return corpus;
}

}  // namespace herald
