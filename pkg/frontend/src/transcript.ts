// Transcript state: the ordered conversation between operator and arm.
// Append-only; a command's response slot fills in when its outcome lands.

export interface TranscriptEntry {
  user: string;
  response: string | null; // null while in flight
}

export class TranscriptModel {
  readonly entries: TranscriptEntry[] = [];

  begin(user: string): number {
    this.entries.push({ user, response: null });
    return this.entries.length - 1;
  }

  complete(index: number, response: string): void {
    this.entries[index].response = response;
  }

  pairs(): Array<[string, string | null]> {
    return this.entries.map((e) => [e.user, e.response]);
  }
}

export type Poster = (text: string) => Promise<{ response: string }>;

export interface SubmitResult {
  accepted: boolean;
  error?: string;
}

/**
 * Submit one command: refuse (with a banner message, no transcript entry)
 * while disconnected; otherwise append the user line immediately and the
 * arm's response when the outcome arrives.  Queueing is server-side, so
 * submissions while a move runs are fine.
 */
export async function submitCommand(
  transcript: TranscriptModel,
  post: Poster,
  text: string,
  connected: boolean,
): Promise<SubmitResult> {
  if (!connected) {
    return { accepted: false, error: "disconnected: command not sent" };
  }
  const index = transcript.begin(text);
  try {
    const outcome = await post(text);
    transcript.complete(index, outcome.response);
    return { accepted: true };
  } catch (err) {
    transcript.complete(index, "(no reply: connection lost)");
    return { accepted: false, error: String(err) };
  }
}

/** Command history with arrow-key recall semantics. */
export class CommandHistory {
  private items: string[] = [];
  private cursor = 0;

  push(text: string): void {
    this.items.push(text);
    this.cursor = this.items.length;
  }

  previous(): string | null {
    if (this.cursor > 0) this.cursor -= 1;
    return this.items[this.cursor] ?? null;
  }

  next(): string | null {
    if (this.cursor < this.items.length) this.cursor += 1;
    return this.items[this.cursor] ?? null;
  }
}
