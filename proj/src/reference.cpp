#include "semnav/kb.hpp"

namespace semnav {

namespace {

// Copies of data/reference.skb and data/reference.pkb.
constexpr std::string_view kConceptual = R"(# Reference conceptual knowledge base for the two-room navigation scenario.

room_class Kitchen
room_class Office
room_class Living_room

object_class Computer
object_class Chair
object_class Television
object_class Playstation
object_class Printer
object_class Refrigerator
object_class Soft_drink
object_class Sofa

utility Work
utility Play
utility Watching_television
utility Sit

meaning Funny
meaning Relaxing

characteristic Cold

room_contains Office Computer
room_contains Office Chair
room_contains Office Printer
room_contains Living_room Chair
room_contains Living_room Television
room_contains Living_room Playstation
room_contains Living_room Sofa
room_contains Kitchen Refrigerator

object_contains Refrigerator Soft_drink

has_utility Computer Play
has_utility Computer Work
has_utility Television Watching_television
has_utility Playstation Play
has_utility Sofa Sit

utility_means Play Funny
utility_means Watching_television Funny
utility_means Sit Relaxing

used_with Printer Computer
used_with Playstation Television

has_characteristic Refrigerator Cold
)";

constexpr std::string_view kPhysical = R"(# Reference physical knowledge base: five instances.

physical_room Room1 Office
physical_room Room2 Kitchen

physical_object Chair1 Chair Room1
physical_object Chair2 Chair Room1
physical_object Computer1 Computer Room1
)";

}  // namespace

std::string_view reference_conceptual_text() { return kConceptual; }
std::string_view reference_physical_text() { return kPhysical; }

const KnowledgeBase& reference_kb() {
  static const KnowledgeBase kb =
      build_kb(parse_conceptual_document(kConceptual),
               parse_physical_document(kPhysical));
  return kb;
}

}  // namespace semnav
