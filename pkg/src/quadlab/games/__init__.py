from .geometry import (Ball, HyperplaneNbhd, ball_in_ball, ball_meets_slab,
                       ball_slab_disjoint, point_in_ball)
from .referee import (BallMove, GameKind, GameState, HistoryEntry, IllegalMove,
                      MatchResult, SlabMove, SlabsMove, apply_move,
                      beta0_default, move_from_json, new_game, play_match,
                      read_transcript, replay_transcript, write_transcript)
from .strategies import (StageWindowAlice, alice_avoid_countable,
                         alice_stage_window, constant_family, dummy_alice,
                         far_slab, minimal_window_order, random_bob,
                         require_flow_step, shrinking_bob, spread_family,
                         stage_of, synthetic_oracle, through_center_family,
                         window_partition, window_set)

__all__ = [name for name in dir() if not name.startswith("_")]
