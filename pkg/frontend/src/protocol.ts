// Wire protocol types, mirroring the server's JSON frames exactly.

export type Point = [number, number];

export interface RosterEntry {
  player_id: string;
  name: string;
}

export interface Score {
  humans: number;
  nn: number;
}

export type ServerMessage =
  | { type: "room_created"; room: string }
  | { type: "joined"; player_id: string; roster: RosterEntry[] }
  | { type: "left"; player_id: string; roster: RosterEntry[] }
  | { type: "role"; role: "sketcher" | "guesser" }
  | { type: "round_start"; round: number; deadline: number; ink_budget: number }
  | { type: "code_word"; word: string }
  | { type: "stroke"; points: Point[] }
  | { type: "ink_update"; used: number; budget: number }
  | { type: "nn_confidence"; word: string | null; confidence: number }
  | { type: "guess_result"; by: string; word: string; correct: boolean }
  | { type: "countdown_restarted"; deadline: number }
  | { type: "round_end"; winner: string | null; word: string; score: Score }
  | { type: "match_end"; winner: string | null; score: Score }
  | { type: "error"; code: string; message: string }
  | { type: "ping" };

export type ClientMessage =
  | { type: "create_room" }
  | { type: "join"; room: string; name: string }
  | { type: "start_match" }
  | { type: "stroke"; points: Point[] }
  | { type: "guess"; word: string }
  | { type: "pong" };

/** Collapse whitespace the same way the server canonicalizes words. */
export function canonicalWord(text: string): string {
  return text.toLowerCase().split(/\s+/).filter(Boolean).join(" ");
}
