// Wire shapes of the documented server contracts.

/** One /api/stream event. elapsed_ms is null on idle heartbeats. */
export interface TickEvent {
  elapsed_ms: number | null;
  joints: number[]; // theta1..theta5, gripper (rad)
  registers: number[]; // pulse widths w0..w5 (us)
  active_command: string | null;
}

/** Response body of POST /api/command. */
export interface CommandOutcome {
  request_id: number;
  text: string;
  response: string;
  settled: boolean;
  goal_count: number;
  final_state: number[];
  trace_id: string;
  matched_phrase: string | null;
  confidence: number | null;
  intent_kind: string | null;
  error_kind: string | null;
  error_detail: string | null;
}

export const PWM_PERIOD_US = 20000;
