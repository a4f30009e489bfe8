// Server-sent event parsing and the generation console model.
//
// The stream is consumed with fetch so the same code runs in the browser
// and under node; reconnects replay the full history, so the console
// de-duplicates by generation index.

import type { GenerationEvent, StreamEvent, SummaryEvent } from "./types.js";

/** Split raw SSE bytes into the JSON payloads of `data:` frames. */
export class SseFrameParser {
  private buffer = "";

  push(chunk: string): StreamEvent[] {
    this.buffer += chunk;
    const events: StreamEvent[] = [];
    let cut: number;
    while ((cut = this.buffer.indexOf("\n\n")) >= 0) {
      const frame = this.buffer.slice(0, cut);
      this.buffer = this.buffer.slice(cut + 2);
      for (const line of frame.split("\n")) {
        if (line.startsWith("data: ")) {
          events.push(JSON.parse(line.slice("data: ".length)) as StreamEvent);
        }
      }
    }
    return events;
  }
}

export async function* streamEvents(
  response: Response
): AsyncGenerator<StreamEvent> {
  if (!response.body) throw new Error("event stream has no body");
  const reader = response.body.getReader();
  const decoder = new TextDecoder();
  const parser = new SseFrameParser();
  for (;;) {
    const { done, value } = await reader.read();
    if (done) break;
    for (const event of parser.push(decoder.decode(value, { stream: true }))) {
      yield event;
    }
  }
}

/** Ordered, de-duplicated view of a job's events. Rendering is done
 * elsewhere; this only decides what lines exist. */
export class EventConsole {
  private generations = new Map<number, GenerationEvent>();
  summary: SummaryEvent | null = null;

  add(event: StreamEvent): boolean {
    if (event.type === "generation") {
      if (this.generations.has(event.generation)) return false;
      this.generations.set(event.generation, event);
      return true;
    }
    if (this.summary !== null) return false;
    this.summary = event;
    return true;
  }

  generationEvents(): GenerationEvent[] {
    return [...this.generations.values()].sort((a, b) => a.generation - b.generation);
  }

  get finished(): boolean {
    return this.summary !== null;
  }
}
