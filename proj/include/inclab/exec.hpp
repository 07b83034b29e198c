#pragma once

namespace inclab {

// Every parallel kernel keeps a serial twin. Results must be identical:
// parallel paths only ever fill index-addressed slots or reduce integers,
// so the schedule cannot reorder arithmetic. Tests assert serial == parallel
// and the bench tool times both.
enum class Exec { serial, parallel };

} // namespace inclab
