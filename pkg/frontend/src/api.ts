import type { ApplyResponse, SceneDocument, StepRecord } from "./types";

export class ServiceError extends Error {
  constructor(message: string, readonly status: number) {
    super(message);
  }
}

async function asJson<T>(response: Response): Promise<T> {
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = await response.json();
      if (body && typeof body.detail === "string") detail = body.detail;
    } catch {
      // keep the status text
    }
    throw new ServiceError(detail, response.status);
  }
  return (await response.json()) as T;
}

/** Thin client for the session service; the UI does no geometry itself. */
export class SessionApi {
  constructor(readonly baseUrl: string) {}

  async createSession(
    strategy: string,
    fixture?: SceneDocument,
  ): Promise<{ id: string; scene: SceneDocument }> {
    const response = await fetch(`${this.baseUrl}/sessions`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(fixture ? { strategy, fixture } : { strategy }),
    });
    return asJson(response);
  }

  async applyInstruction(id: string, instruction: string): Promise<ApplyResponse> {
    const response = await fetch(`${this.baseUrl}/sessions/${id}/instructions`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ instruction }),
    });
    return asJson(response);
  }

  async getScene(id: string): Promise<SceneDocument> {
    return asJson(await fetch(`${this.baseUrl}/sessions/${id}/scene`));
  }

  async getHistory(id: string): Promise<{ steps: StepRecord[] }> {
    return asJson(await fetch(`${this.baseUrl}/sessions/${id}/history`));
  }

  async undo(id: string): Promise<{ scene: SceneDocument }> {
    const response = await fetch(`${this.baseUrl}/sessions/${id}/undo`, { method: "POST" });
    return asJson(response);
  }
}
